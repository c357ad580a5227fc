#include "sdde/sensitivity.hpp"

#include <cmath>
#include <string>

#include "sdde/error.hpp"
#include "sdde/integrator.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"

namespace sdde {

SensitivityRun solve_U(const SddeModel& model, const PathGrid& x_path, double lambda, const Segment& z,
                       bool skip_weight) {
  if (!model.has_gradients()) throw MissingCapability("model '" + model.name + "' does not supply gradients");
  if (!(lambda >= 0)) throw DomainError("lambda must be non-negative");
  const std::size_t n = model.dim_state;
  const std::size_t m = model.dim_noise;
  if (z.dim() != n || z.delay_steps() != x_path.delay_steps() || z.dt() != x_path.dt())
    throw GridMismatch("direction z does not match the base path grid");

  SensitivityRun run;
  run.lambda = lambda;
  run.direction = z;
  run.weight_recorded = !(skip_weight && lambda == 0.0);
  if (run.weight_recorded && !model.has_inverse())
    throw MissingCapability("model '" + model.name + "' has no diffusion right inverse for the weight integral");

  const std::size_t steps = x_path.steps();
  const double dt = x_path.dt();
  run.u_path = PathGrid(z, m, steps);
  std::vector<double> grad_a(n), grad_sigma(n * m), inv(m * n), next(n);
  double weight = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const SegmentView x = x_path.segment_view(k);
    const SegmentView u = run.u_path.segment_view(k);
    const auto dW = x_path.increment(k);
    const auto u_now = u.now();
    model.drift_gradient(x, u, grad_a);
    model.diffusion_gradient(x, u, grad_sigma);
    for (std::size_t i = 0; i < n; ++i) {
      double v = u_now[i] + (grad_a[i] - lambda * u_now[i]) * dt;
      for (std::size_t j = 0; j < m; ++j) v += grad_sigma[i * m + j] * dW[j];
      next[i] = v;
    }
    if (run.weight_recorded) {
      model.diffusion_right_inverse(x, inv);
      for (std::size_t j = 0; j < m; ++j) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) w += inv[j * n + i] * u_now[i];
        weight += w * dW[j];
      }
    }
    run.u_path.append(next, dW);
  }
  run.weight_integral = weight;
  return run;
}

double weight_integral(const SddeModel& model, const PathGrid& x_path, const SensitivityRun& run) {
  if (!model.has_inverse())
    throw MissingCapability("model '" + model.name + "' has no diffusion right inverse for the weight integral");
  const std::size_t n = model.dim_state;
  const std::size_t m = model.dim_noise;
  const std::size_t steps = std::min(x_path.steps(), run.u_path.steps());
  std::vector<double> inv(m * n);
  double weight = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    model.diffusion_right_inverse(x_path.segment_view(k), inv);
    const auto u = run.u_path.state_at_step(k);
    const auto dW = x_path.increment(k);
    for (std::size_t j = 0; j < m; ++j) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i) w += inv[j * n + i] * u[i];
      weight += w * dW[j];
    }
  }
  return weight;
}

namespace {

GradientEstimate to_estimate(const std::vector<double>& samples, double lambda, double t) {
  const auto est = mean_estimate(samples);
  return {est.mean, est.std_error, est.n, lambda, t};
}

}  // namespace

GradientEstimate estimate_gradient(const SddeModel& model, const Segment& x, const Segment& z, const Functional& f,
                                   const FunctionalGradient& grad_f, double t, double lambda,
                                   const SensitivityOptions& options) {
  if (!f || !grad_f) throw DomainError("estimate_gradient needs f and its gradient");
  if (lambda > 0 && !model.has_inverse())
    throw MissingCapability("lambda > 0 needs a diffusion right inverse on model '" + model.name + "'");
  const std::size_t steps = exact_steps(t, x.dt(), "estimation time t");
  const Segment zero(x.dim(), x.delay_steps(), x.dt());
  const double f_center = f(zero);
  const auto samples = parallel_map(options.paths, options.workers, [&](std::size_t i) {
    GaussianNoise noise(derive_seed(options.seed, i, StreamTag::base_noise), x.dt());
    const PathGrid path = em_simulate(model, x, steps, noise);
    const SensitivityRun run = solve_U(model, path, lambda, z, /*skip_weight=*/true);
    const SegmentView xt = path.segment_view(steps);
    double value = grad_f(xt, run.u_path.segment_view(steps));
    if (lambda > 0) value += lambda * (f(xt) - f_center) * run.weight_integral;
    return value;
  });
  return to_estimate(samples, lambda, t);
}

GradientEstimate fd_oracle(const SddeModel& model, const Segment& x, const Segment& z, const Functional& f, double t,
                           double eps, const SensitivityOptions& options) {
  if (eps == 0.0 || !std::isfinite(eps)) throw DomainError("finite-difference step eps must be nonzero");
  if (!f) throw DomainError("fd_oracle needs f");
  require_same_grid(x, z);
  const std::size_t steps = exact_steps(t, x.dt(), "estimation time t");
  Segment shifted = x;
  Segment dz = z;
  dz *= eps;
  shifted += dz;
  const auto samples = parallel_map(options.paths, options.workers, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(options.seed, i, StreamTag::base_noise);
    GaussianNoise noise_a(seed, x.dt());
    GaussianNoise noise_b(seed, x.dt());
    const PathGrid base = em_simulate(model, x, steps, noise_a);
    const PathGrid bumped = em_simulate(model, shifted, steps, noise_b);
    return (f(bumped.segment_view(steps)) - f(base.segment_view(steps))) / eps;
  });
  return to_estimate(samples, 0.0, t);
}

std::vector<SensitivityRun> sensitivity_batch(const SddeModel& model, const Segment& x, const Segment& z,
                                              double lambda, std::size_t steps, const SensitivityOptions& options) {
  return parallel_map(options.paths, options.workers, [&](std::size_t i) {
    GaussianNoise noise(derive_seed(options.seed, i, StreamTag::base_noise), x.dt());
    const PathGrid path = em_simulate(model, x, steps, noise);
    return solve_U(model, path, lambda, z, /*skip_weight=*/true);
  });
}

DecayFit decay_diagnostic(std::span<const SensitivityRun> runs, std::span<const double> times) {
  if (times.size() < 2) throw DomainError("decay diagnostic needs at least two time points");
  if (runs.size() < 100) throw DomainError("decay diagnostic needs a batch of at least 100 runs");
  DecayFit fit;
  std::vector<double> log_sq;
  for (double t : times) {
    double sum = 0.0;
    for (const auto& run : runs) {
      const std::size_t k = exact_steps(t, run.u_path.dt(), "decay time");
      if (k > run.u_path.steps()) throw DomainError("decay time beyond the run horizon");
      const double s = run.u_path.segment_view(k).sup_norm();
      sum += s * s;
    }
    const double mean = sum / static_cast<double>(runs.size());
    fit.mean_sq.push_back(mean);
    if (!(mean > 0) || !std::isfinite(mean)) fit.degenerate = true;
    log_sq.push_back(std::log(mean));
  }
  if (fit.degenerate) return fit;
  const auto lf = linear_fit(times, log_sq);
  fit.rate = lf.slope;
  fit.ci95 = times.size() > 2 ? lf.slope_ci95() : 0.0;
  return fit;
}

}  // namespace sdde
