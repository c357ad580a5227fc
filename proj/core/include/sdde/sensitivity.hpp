#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdde/grid.hpp"
#include "sdde/model.hpp"
#include "sdde/path.hpp"
#include "sdde/stats.hpp"

namespace sdde {

/// Derivative process U^{lambda,z} along one base path, integrated with the
/// base path's own increments.
struct SensitivityRun {
  PathGrid u_path;
  /// sum_k sigma(X_{t_k})^{-1} U(t_k) . dW_k over the whole run; 0 when skipped.
  double weight_integral = 0.0;
  bool weight_recorded = false;
  double lambda = 0.0;
  Segment direction;
};

/// Euler scheme for dU = <grad a(X_t), U_t> dt + <grad sigma(X_t), U_t> dW - lambda U dt,
/// U_0 = z. The weight integral is recorded unless lambda == 0 and skip_weight.
SensitivityRun solve_U(const SddeModel& model, const PathGrid& x_path, double lambda, const Segment& z,
                       bool skip_weight = false);

/// Left-endpoint Ito sum of sigma^{-1} U against the base increments.
double weight_integral(const SddeModel& model, const PathGrid& x_path, const SensitivityRun& run);

struct GradientEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  double lambda = 0.0;
  double t = 0.0;
};

using Functional = std::function<double(SegmentView)>;
/// <grad f(x), u>
using FunctionalGradient = std::function<double(SegmentView x, SegmentView u)>;

struct SensitivityOptions {
  std::size_t paths = 10000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Monte Carlo estimate of grad_z E_x f(X_t) from the representation
/// E <grad f(X_t), U_t> + lambda E (f(X_t) - f(0)) int sigma^{-1} U dW.
/// Path i uses derive_seed(seed, i, base_noise).
GradientEstimate estimate_gradient(const SddeModel& model, const Segment& x, const Segment& z, const Functional& f,
                                   const FunctionalGradient& grad_f, double t, double lambda,
                                   const SensitivityOptions& options);

/// Forward difference (f(X_t^{x + eps z}) - f(X_t^x)) / eps with
/// both solutions driven by the same increments (same seeds as estimate_gradient).
GradientEstimate fd_oracle(const SddeModel& model, const Segment& x, const Segment& z, const Functional& f, double t,
                           double eps, const SensitivityOptions& options);

/// Runs of U^{lambda,z} along independent base paths from x.
std::vector<SensitivityRun> sensitivity_batch(const SddeModel& model, const Segment& x, const Segment& z,
                                              double lambda, std::size_t steps, const SensitivityOptions& options);

struct DecayFit {
  double rate = 0.0;   // slope of log E|U_t|^2 against t
  double ci95 = 0.0;
  bool degenerate = false;
  std::vector<double> mean_sq;  // E |U_t|^2 per time (sup norm over the segment)
};

/// Least-squares slope of log E|U_t|^2 over `times`. Flags the fit as degenerate
/// (rate left at 0) when U vanishes at some time.
DecayFit decay_diagnostic(std::span<const SensitivityRun> runs, std::span<const double> times);

}  // namespace sdde
