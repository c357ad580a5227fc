#include "sdde/support.hpp"

#include <cmath>
#include <limits>

#include "sdde/error.hpp"
#include "sdde/girsanov.hpp"
#include "sdde/integrator.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"

namespace sdde {

std::vector<double> bridge_target(const Segment& z, std::size_t h_steps, std::size_t k) {
  const std::size_t L = z.delay_steps();
  if (h_steps <= L) throw DomainError("bridge target needs h > r");
  if (k > h_steps) throw DomainError("bridge target queried beyond h");
  const std::size_t ramp_end = h_steps - L;
  if (k >= ramp_end) {
    auto p = z.point(k - ramp_end);
    return {p.begin(), p.end()};
  }
  auto start = z.point(0);
  std::vector<double> out(start.begin(), start.end());
  const double frac = static_cast<double>(k) / static_cast<double>(ramp_end);
  for (double& v : out) v *= frac;
  return out;
}

DiffBoundOptimum maximize_diff_lower_bound(double mu_A, double kl, double log_n_min, double log_n_max,
                                           std::size_t grid_points) {
  if (!(log_n_min > 0.0 && log_n_max > log_n_min) || grid_points < 2) {
    throw DomainError("maximize_diff_lower_bound: bad ln N grid");
  }
  DiffBoundOptimum best;
  best.log_value = -std::numeric_limits<double>::infinity();
  best.value = -std::numeric_limits<double>::infinity();
  const double ratio = std::log(log_n_max / log_n_min) / static_cast<double>(grid_points - 1);
  bool any_positive = false;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double log_n = log_n_min * std::exp(ratio * static_cast<double>(i));
    const double lv = log_diff_lower_bound(mu_A, kl, log_n);
    if (std::isfinite(lv)) {
      if (!any_positive || lv > best.log_value) {
        best.log_value = lv;
        best.log_n = log_n;
        best.value = std::exp(lv);
      }
      any_positive = true;
    } else if (!any_positive) {
      // No positive value yet; track the largest raw (negative) bound.
      const double v = mu_A * std::exp(-log_n) - (kl + std::log(2.0)) * std::exp(-log_n) / log_n;
      if (v > best.value) {
        best.value = v;
        best.log_n = log_n;
      }
    }
  }
  return best;
}

SupportProbeResult support_probe(const SddeModel& model, const Segment& x, const Segment& z,
                                 const SupportProbeConfig& config) {
  model.validate();
  if (!(config.delta > 0.0)) throw DomainError("support_probe needs delta > 0");
  if (!(config.lambda >= 0.0)) throw DomainError("support_probe needs lambda >= 0");
  if (config.paths == 0) throw DomainError("support_probe needs paths > 0");
  require_same_grid(x, z);
  if (!model.has_inverse()) throw MissingCapability("support_probe needs a diffusion right inverse");
  const std::size_t h_steps = exact_steps(config.h, x.dt(), "h");
  const std::size_t n = model.dim_state;
  const std::size_t m = model.dim_noise;

  // Precomputed pull targets, shared read-only by all workers.
  std::vector<double> targets((h_steps + 1) * n);
  for (std::size_t k = 0; k <= h_steps; ++k) {
    auto t = bridge_target(z, h_steps, k);
    std::copy(t.begin(), t.end(), targets.begin() + static_cast<std::ptrdiff_t>(k * n));
  }

  struct Outcome {
    bool success = false;
    double kl = 0.0;
  };
  auto outcomes = parallel_map(config.paths, config.workers, [&](std::size_t i) {
    GaussianNoise noise(derive_seed(config.seed, i, StreamTag::base_noise), x.dt());
    PathGrid path(x, m, h_steps);
    EulerMaruyama em(model);
    GirsanovLedger ledger;
    std::vector<double> dW(m), chi(n), inv(m * n), eta(m), next(n);
    for (std::size_t k = 0; k < h_steps; ++k) {
      SegmentView seg = path.segment_view(k);
      noise.next(dW);
      auto now = seg.now();
      for (std::size_t c = 0; c < n; ++c) chi[c] = -config.lambda * (now[c] - targets[k * n + c]);
      model.diffusion_right_inverse(seg, inv);
      std::fill(eta.begin(), eta.end(), 0.0);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t c = 0; c < n; ++c) eta[j] += inv[j * n + c] * chi[c];
      }
      ledger.accumulate_signed(eta, dW, x.dt(), -1.0);
      em.step(seg, dW, x.dt(), chi, next);
      path.append(next, dW);
    }
    return Outcome{sup_dist(path.segment_view(h_steps), z) <= config.delta, ledger.kl_half_integral};
  });

  SupportProbeResult res;
  res.paths = config.paths;
  std::size_t successes = 0;
  double kl_sum = 0.0;
  for (const auto& o : outcomes) {
    successes += o.success ? 1 : 0;
    kl_sum += o.kl;
  }
  res.success_prob = static_cast<double>(successes) / static_cast<double>(config.paths);
  res.kl_mean = kl_sum / static_cast<double>(config.paths);
  const auto opt = maximize_diff_lower_bound(res.success_prob, res.kl_mean, config.log_n_min, config.log_n_max,
                                             config.n_grid);
  res.best_log_n = opt.log_n;
  res.lower_bound = opt.value;
  res.log_lower_bound = opt.log_value;
  return res;
}

}  // namespace sdde
