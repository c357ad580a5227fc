#include "sdde/ergodicity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sdde/integrator.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"
#include "sdde/transport.hpp"

namespace sdde {

std::vector<Segment> skeleton(const PathGrid& path, double h) {
  const std::size_t h_steps = exact_steps(h, path.dt(), "skeleton spacing h");
  if (h_steps == 0) throw DomainError("skeleton spacing h must be positive");
  if (path.steps() < h_steps) throw DomainError("path is shorter than one skeleton step");
  std::vector<Segment> out;
  for (std::size_t k = h_steps; k <= path.steps(); k += h_steps) out.push_back(path.segment_at(k));
  return out;
}

namespace {

std::vector<double> cost_matrix(std::span<const Segment> a, std::span<const Segment> b, const MetricSpec& spec) {
  std::vector<double> cost(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) cost[i * b.size() + j] = d_metric(a[i], b[j], spec);
  return cost;
}

}  // namespace

double empirical_coupling_distance(std::span<const Segment> sample_a, std::span<const Segment> sample_b,
                                   const MetricSpec& spec) {
  spec.validate();
  if (sample_a.empty() || sample_b.empty()) throw DomainError("coupling distance needs nonempty samples");
  if (sample_a.size() > kMaxTransportSample || sample_b.size() > kMaxTransportSample)
    throw DomainError("sample sizes " + std::to_string(sample_a.size()) + " and " + std::to_string(sample_b.size()) +
                      " exceed the exact solver cap of " + std::to_string(kMaxTransportSample) +
                      "; subsample before calling");
  const auto cost = cost_matrix(sample_a, sample_b, spec);
  if (sample_a.size() == sample_b.size()) {
    const auto n = sample_a.size();
    return solve_assignment(cost, n).total_cost / static_cast<double>(n);
  }
  return solve_uniform_transport(cost, sample_a.size(), sample_b.size());
}

double kr_dual_value(const TestFunctional& f, std::span<const Segment> sample_a, std::span<const Segment> sample_b,
                     const MetricSpec& spec) {
  spec.validate();
  if (sample_a.empty() || sample_b.empty()) throw DomainError("dual value needs nonempty samples");
  std::vector<const Segment*> pooled;
  std::vector<double> values;
  for (const auto& s : sample_a) pooled.push_back(&s);
  for (const auto& s : sample_b) pooled.push_back(&s);
  values.reserve(pooled.size());
  for (const auto* s : pooled) values.push_back(f(*s));

  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = i + 1; j < pooled.size(); ++j) {
      const double d = d_metric(*pooled[i], *pooled[j], spec);
      const double diff = std::abs(values[i] - values[j]);
      if (diff > d + 1e-12) {
        throw LipschitzViolation("test functional is not 1-Lipschitz on pooled points " + std::to_string(i) +
                                 " and " + std::to_string(j) + ": |f diff| = " + std::to_string(diff) +
                                 " > d = " + std::to_string(d));
      }
    }
  }

  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < sample_a.size(); ++i) mean_a += values[i];
  for (std::size_t j = 0; j < sample_b.size(); ++j) mean_b += values[sample_a.size() + j];
  mean_a /= static_cast<double>(sample_a.size());
  mean_b /= static_cast<double>(sample_b.size());
  return std::abs(mean_a - mean_b);
}

std::vector<Segment> stationary_estimate(const SddeModel& model, const Segment& x0, double burn_in, double h,
                                         std::size_t n_samples, std::uint64_t seed) {
  const std::size_t burn = exact_steps(burn_in, x0.dt(), "burn-in");
  const std::size_t h_steps = exact_steps(h, x0.dt(), "thinning spacing h");
  if (n_samples == 0) return {};
  if (h_steps == 0) throw DomainError("thinning spacing h must be positive");
  const std::size_t limit = std::numeric_limits<std::size_t>::max();
  if (n_samples - 1 > (limit - burn) / h_steps) throw DomainError("stationary run length overflows");
  const std::size_t total = burn + (n_samples - 1) * h_steps;

  GaussianNoise noise(derive_seed(seed, 0, StreamTag::stationary), x0.dt());
  const PathGrid path = em_simulate(model, x0, total, noise);
  std::vector<Segment> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) out.push_back(path.segment_at(burn + i * h_steps));
  return out;
}

std::vector<Segment> sample_segments_at(const SddeModel& model, const Segment& x0, double t, std::size_t n_paths,
                                        std::uint64_t seed, std::size_t workers) {
  const std::size_t steps = exact_steps(t, x0.dt(), "sampling time");
  return parallel_map(n_paths, workers, [&](std::size_t i) {
    GaussianNoise noise(derive_seed(seed, i, StreamTag::base_noise), x0.dt());
    return em_simulate(model, x0, steps, noise).segment_at(steps);
  });
}

}  // namespace sdde
