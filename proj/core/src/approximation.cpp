#include "sdde/approximation.hpp"

#include <algorithm>
#include <cmath>

#include "sdde/coupling.hpp"
#include "sdde/error.hpp"
#include "sdde/integrator.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"

namespace sdde {

namespace {

double inverse_sup(const SddeModel& model, const std::vector<Segment>& probes) {
  if (model.holder.inverse_bound) return *model.holder.inverse_bound;
  if (!model.has_inverse()) throw MissingCapability("model '" + model.name + "' has no diffusion right inverse");
  std::vector<double> inv(model.dim_noise * model.dim_state);
  double best = 0.0;
  for (const auto& p : probes) {
    model.diffusion_right_inverse(p, inv);
    double s = 0.0;
    for (double v : inv) s += v * v;
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

}  // namespace

double approximation_upsilon(const SddeModel& exact, const SddeModel& mollified, const std::vector<Segment>& probes) {
  if (probes.empty()) throw DomainError("approximation_upsilon needs a probe cloud");
  const std::size_t n = exact.dim_state;
  const std::size_t m = exact.dim_noise;
  std::vector<double> a(n), ae(n), s(n * m), se(n * m);
  double drift_gap = 0.0, diff_gap = 0.0;
  for (const auto& p : probes) {
    exact.drift(p, a);
    mollified.drift(p, ae);
    exact.diffusion(p, s);
    mollified.diffusion(p, se);
    double da = 0.0, ds = 0.0;
    for (std::size_t i = 0; i < n; ++i) da += (a[i] - ae[i]) * (a[i] - ae[i]);
    for (std::size_t i = 0; i < n * m; ++i) ds += (s[i] - se[i]) * (s[i] - se[i]);
    drift_gap = std::max(drift_gap, std::sqrt(da));
    diff_gap = std::max(diff_gap, std::sqrt(ds));
  }
  return std::max(std::pow(drift_gap, 1.0 / exact.holder.alpha), std::pow(diff_gap, 1.0 / exact.holder.beta));
}

std::vector<ApproximationRow> approximation_study(const SddeModel& model, const MollifiedFamily& mollified,
                                                  const Segment& x0, const ApproximationConfig& config) {
  if (config.eps.empty()) throw DomainError("approximation_study needs at least one eps");
  if (!(config.gamma > 0.0 && config.gamma <= 1.0)) throw DomainError("approximation_study needs gamma in (0, 1]");
  if (config.paths == 0) throw DomainError("approximation_study needs paths > 0");
  const double T = static_cast<double>(config.steps) * x0.dt();

  std::vector<ApproximationRow> rows;
  for (double eps : config.eps) {
    const SddeModel moll = mollified(eps);
    ApproximationRow row;
    row.eps = eps;
    row.upsilon = approximation_upsilon(model, moll, config.probes);
    if (row.upsilon < config.upsilon_floor) {
      row.upsilon = config.upsilon_floor;
      row.floored = true;
    }
    row.gain = std::pow(row.upsilon, config.gamma - 1.0);
    const bool ledger = moll.has_inverse();
    const double inv = ledger ? inverse_sup(moll, config.probes) : 0.0;
    row.kl_bound = 0.5 * T * inv * inv * std::pow(row.upsilon, 2.0 * config.gamma);

    struct PathOutcome {
      bool success = false;
      double kl = 0.0;
    };
    auto outcomes = parallel_map(config.paths, config.workers, [&](std::size_t i) {
      GaussianNoise noise(derive_seed(config.seed, i, StreamTag::base_noise), x0.dt());
      CoupledRun run = run_coupled_pair(model, moll, x0, x0, config.steps, noise, row.gain, row.upsilon, ledger);
      double worst = 0.0;
      for (std::size_t k = 0; k <= config.steps; ++k) {
        auto a = run.path_x.state_at_step(k);
        auto b = run.path_y.state_at_step(k);
        double s = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
        worst = std::max(worst, std::sqrt(s));
      }
      return PathOutcome{worst <= row.upsilon, run.ledger.kl_half_integral};
    });

    std::size_t successes = 0;
    double kl_sum = 0.0;
    for (const auto& o : outcomes) {
      successes += o.success ? 1 : 0;
      kl_sum += o.kl;
      row.kl_max = std::max(row.kl_max, o.kl);
      if (o.kl > row.kl_bound * (1.0 + 1e-12)) ++row.kl_bound_violations;
    }
    row.success_freq = static_cast<double>(successes) / static_cast<double>(config.paths);
    row.kl_mean = kl_sum / static_cast<double>(config.paths);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Segment> constant_probe_cloud(const TimeGrid& grid, std::size_t dim, double range) {
  std::vector<Segment> cloud;
  for (int k = 0; k <= 160; ++k) {
    const double u = std::pow(10.0, -static_cast<double>(k) / 20.0);
    cloud.push_back(Segment::constant(grid, std::vector<double>(dim, u)));
    cloud.push_back(Segment::constant(grid, std::vector<double>(dim, -u)));
  }
  for (int k = -200; k <= 200; ++k) {
    cloud.push_back(Segment::constant(grid, std::vector<double>(dim, range * k / 200.0)));
  }
  return cloud;
}

}  // namespace sdde
