#include "sdde/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdde/error.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"

namespace sdde {

void MetricSpec::validate() const {
  if (!(N >= 1.0)) throw DomainError("metric needs N >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("metric needs gamma in (0, 1]");
}

double d_metric(SegmentView x, SegmentView y, const MetricSpec& spec) {
  spec.validate();
  const double d = sup_dist(x, y);
  return std::min(spec.N * std::pow(d, spec.gamma), 1.0);
}

std::span<const double> CoupledRun::control(std::size_t k) const {
  const std::size_t n = path_x.dim();
  return {control_record.data() + k * n, n};
}

double CoupledRun::max_control_norm() const {
  const std::size_t n = path_x.dim();
  double best = 0.0;
  for (std::size_t k = 0; k * n < control_record.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += control_record[k * n + i] * control_record[k * n + i];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

CoupledRun run_coupled_pair(const SddeModel& model_x, const SddeModel& model_y, const Segment& x,
                            const Segment& y, std::size_t steps, NoiseSource& noise, double gain,
                            double threshold, bool ledger) {
  model_x.validate();
  model_y.validate();
  require_same_grid(x, y);
  if (model_x.dim_state != model_y.dim_state || model_x.dim_noise != model_y.dim_noise ||
      x.dim() != model_x.dim_state) {
    throw DomainError("coupled models must share dimensions with the initial segments");
  }
  if (ledger && !model_y.has_inverse()) {
    throw MissingCapability("ledger requested but model '" + model_y.name + "' has no diffusion right inverse");
  }
  const std::size_t n = model_x.dim_state;
  const std::size_t m = model_x.dim_noise;
  const double dt = x.dt();

  CoupledRun run;
  run.path_x = PathGrid(x, m, steps);
  run.path_y = PathGrid(y, m, steps);
  run.control_record.assign(steps * n, 0.0);
  run.gain = gain;

  EulerMaruyama em_x(model_x);
  EulerMaruyama em_y(model_y);
  std::vector<double> dW(m), chi(n), next_x(n), next_y(n), inv(m * n), eta(m);
  const bool controlled = gain != 0.0;

  auto crossed = [&](std::size_t k) {
    auto a = run.path_x.state_at_step(k);
    auto b = run.path_y.state_at_step(k);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s) >= threshold;
  };

  for (std::size_t k = 0; k < steps; ++k) {
    if (controlled && !run.stopped() && crossed(k)) run.tau_step = k;
    noise.next(dW);
    SegmentView sx = run.path_x.segment_view(k);
    SegmentView sy = run.path_y.segment_view(k);
    const bool active = controlled && !run.stopped();
    if (active) {
      auto a = sx.now();
      auto b = sy.now();
      for (std::size_t i = 0; i < n; ++i) chi[i] = gain * (a[i] - b[i]);
      std::copy(chi.begin(), chi.end(), run.control_record.begin() + static_cast<std::ptrdiff_t>(k * n));
    } else {
      std::fill(chi.begin(), chi.end(), 0.0);
    }
    if (ledger) {
      std::fill(eta.begin(), eta.end(), 0.0);
      if (active) {
        model_y.diffusion_right_inverse(sy, inv);
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t i = 0; i < n; ++i) eta[j] += inv[j * n + i] * chi[i];
        }
      }
      run.ledger.accumulate_signed(eta, dW, dt, -1.0);
    }
    try {
      em_x.step(sx, dW, dt, {}, next_x);
      em_y.step(sy, dW, dt, chi, next_y);
    } catch (const NonFiniteError& e) {
      throw NonFiniteError(std::string(e.what()) + " at step " + std::to_string(k), e.segment(),
                           static_cast<std::ptrdiff_t>(k));
    }
    run.path_x.append(next_x, dW);
    run.path_y.append(next_y, dW);
  }
  if (controlled && !run.stopped() && crossed(steps)) run.tau_step = steps;
  return run;
}

CoupledRun run_synchronous(const SddeModel& model, const Segment& x, const Segment& y, std::size_t steps,
                           NoiseSource& noise) {
  CoupledRun run = run_coupled_pair(model, model, x, y, steps, noise, 0.0, 0.0, false);
  run.upsilon = sup_dist(x, y);
  return run;
}

CoupledRun run_controlled(const SddeModel& model, const Segment& x, const Segment& y, const ControlSpec& spec,
                          std::size_t steps, NoiseSource& noise) {
  if (!(spec.gamma > 0.0 && spec.gamma <= 1.0)) throw DomainError("control needs gamma in (0, 1]");
  if (!(spec.threshold_mult > 0.0)) throw DomainError("control needs threshold_mult > 0");
  const bool ledger = spec.mode == LedgerMode::with_ledger;
  if (ledger && !model.has_inverse()) {
    throw MissingCapability("with_ledger needs a diffusion right inverse for model '" + model.name + "'");
  }
  const double upsilon = sup_dist(x, y);
  std::vector<std::string> warnings;
  const double limit = std::min(model.holder.alpha, 2.0 * model.holder.beta - 1.0);
  if (!(spec.gamma < limit)) {
    std::ostringstream os;
    os << "gamma = " << spec.gamma << " is not below alpha ^ (2 beta - 1) = " << limit;
    warnings.push_back(os.str());
  }
  if (upsilon == 0.0) {
    warnings.emplace_back("x == y: falling back to the synchronous coupling");
    CoupledRun run = run_coupled_pair(model, model, x, y, steps, noise, 0.0, 0.0, false);
    run.warnings = std::move(warnings);
    return run;
  }
  const double gain = std::pow(upsilon, spec.gamma - 1.0);
  CoupledRun run = run_coupled_pair(model, model, x, y, steps, noise, gain, spec.threshold_mult * upsilon, ledger);
  run.upsilon = upsilon;
  if (gain * x.dt() >= 1.0) {
    warnings.emplace_back("control gain * dt >= 1: explicit Euler overshoots the control");
  }
  run.warnings = std::move(warnings);
  return run;
}

std::vector<CoupledRun> run_synchronous_batch(const SddeModel& model, const Segment& x, const Segment& y,
                                              std::size_t steps, const BatchOptions& batch) {
  return parallel_map(batch.paths, batch.workers, [&](std::size_t i) {
    GaussianNoise noise(derive_seed(batch.seed, i, StreamTag::base_noise), x.dt());
    return run_synchronous(model, x, y, steps, noise);
  });
}

std::vector<CoupledRun> run_controlled_batch(const SddeModel& model, const Segment& x, const Segment& y,
                                             const ControlSpec& spec, std::size_t steps,
                                             const BatchOptions& batch) {
  return parallel_map(batch.paths, batch.workers, [&](std::size_t i) {
    GaussianNoise noise(derive_seed(batch.seed, i, StreamTag::base_noise), x.dt());
    return run_controlled(model, x, y, spec, steps, noise);
  });
}

ContractionEstimate contraction_estimate(std::span<const CoupledRun> runs, double h, double theta) {
  if (runs.empty()) throw DomainError("contraction_estimate needs a non-empty batch");
  if (!(theta > 0.0)) throw DomainError("contraction_estimate needs theta > 0");
  const Segment x0 = runs.front().path_x.segment_at(0);
  const Segment y0 = runs.front().path_y.segment_at(0);
  const double initial = sup_dist(x0, y0);
  const std::size_t h_steps = exact_steps(h, x0.dt(), "h");

  ContractionEstimate est;
  est.n = runs.size();
  est.degenerate = initial == 0.0;
  std::size_t exceed = 0;
  double ratio_sum = 0.0, kl_sum = 0.0;
  for (const auto& run : runs) {
    if (run.path_x.segment_at(0) != x0 || run.path_y.segment_at(0) != y0) {
      throw DomainError("contraction_estimate: runs do not share initial segments");
    }
    const double dist = sup_dist(run.path_x.segment_view(h_steps), run.path_y.segment_view(h_steps));
    if (dist >= theta * initial && !est.degenerate) ++exceed;
    if (!est.degenerate) ratio_sum += dist / initial;
    kl_sum += run.ledger.kl_half_integral;
  }
  const double n = static_cast<double>(runs.size());
  est.exceed_prob = static_cast<double>(exceed) / n;
  est.mean_ratio = est.degenerate ? 0.0 : ratio_sum / n;
  est.mean_kl = kl_sum / n;
  est.tv_bound = pinsker_tv_bound(est.mean_kl);
  return est;
}

N0Bound n0_bound(double theta, double theta1, double gamma, double C_tv, double C_p, double upsilon0) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("n0_bound needs theta in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("n0_bound needs gamma in (0, 1]");
  if (!(C_tv >= 0.0 && C_p >= 0.0)) throw DomainError("n0_bound needs non-negative constants");
  if (!(upsilon0 > 0.0)) throw DomainError("n0_bound needs upsilon0 > 0");
  const double base = std::pow(theta, gamma);
  if (!(theta1 > base && theta1 < 1.0)) {
    throw DomainError("n0_bound needs theta1 in (theta^gamma, 1) = (" + std::to_string(base) + ", 1)");
  }
  N0Bound b;
  b.n1 = std::pow(upsilon0, -gamma);
  b.n2 = (C_p + C_tv) / (theta1 - base);
  b.n0 = std::max(b.n1, b.n2);
  return b;
}

}  // namespace sdde
