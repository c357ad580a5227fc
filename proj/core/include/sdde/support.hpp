#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdde/grid.hpp"
#include "sdde/model.hpp"

namespace sdde {

struct SupportProbeConfig {
  double h = 2.0;
  double delta = 0.25;
  double lambda = 50.0;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  /// Log-grid for N in the lower bound: ln N ranges over [log_n_min, log_n_max].
  double log_n_min = 1e-3;
  double log_n_max = 700.0;
  std::size_t n_grid = 4000;
};

struct SupportProbeResult {
  double success_prob = 0.0;   // P(|X_h - z| <= delta) under the pulled dynamics
  double kl_mean = 0.0;
  double best_log_n = 0.0;
  double lower_bound = 0.0;    // diff bound at the best N; may underflow to 0, see log_lower_bound
  double log_lower_bound = 0.0;
  std::size_t paths = 0;
};

/// Bridge target z^h at step k: z(t - h) on [h - r, h], linear ramp z(h - r) t / (h - r) before.
std::vector<double> bridge_target(const Segment& z, std::size_t h_steps, std::size_t k);

/// Runs dX = a dt + sigma dW - lambda (X - z^h) dt from x, books the KL of the
/// pull and maximizes the diff lower bound for the uncontrolled success
/// probability over a log-grid of N.
SupportProbeResult support_probe(const SddeModel& model, const Segment& x, const Segment& z,
                                 const SupportProbeConfig& config);

struct DiffBoundOptimum {
  double log_n = 0.0;
  double value = 0.0;
  double log_value = 0.0;
};

/// Maximizes diff_lower_bound(mu_A, kl, N) over ln N on a geometric grid.
DiffBoundOptimum maximize_diff_lower_bound(double mu_A, double kl, double log_n_min, double log_n_max,
                                           std::size_t grid_points);

}  // namespace sdde
