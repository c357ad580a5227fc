#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "sdde/grid.hpp"
#include "sdde/model.hpp"

namespace sdde {

/// Lipschitz approximations a^eps, sigma^eps of a model, indexed by eps.
using MollifiedFamily = std::function<SddeModel(double eps)>;

struct ApproximationConfig {
  std::vector<double> eps;
  double gamma = 0.4;
  std::size_t steps = 100;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  double upsilon_floor = 1e-12;
  /// Finite stand-in for the compact set on which the coefficients are compared.
  std::vector<Segment> probes;
};

struct ApproximationRow {
  double eps = 0.0;
  double upsilon = 0.0;
  bool floored = false;
  double gain = 0.0;             // upsilon^{gamma - 1}
  double success_freq = 0.0;     // P(max_t |Y^eps - X| <= upsilon)
  double kl_mean = 0.0;
  double kl_max = 0.0;
  double kl_bound = 0.0;         // T sup|sigma^{-1}|^2 upsilon^{2 gamma} / 2
  std::size_t kl_bound_violations = 0;
};

/// upsilon = max( sup|a^eps - a|^{1/alpha}, sup|sigma^eps - sigma|_F^{1/beta} ) over the probes,
/// using the exact model's declared alpha and beta.
double approximation_upsilon(const SddeModel& exact, const SddeModel& mollified, const std::vector<Segment>& probes);

/// For each eps: X solves the exact model, Y^eps the mollified one plus
/// upsilon^{gamma-1} (X - Y^eps) until |X - Y^eps| first reaches upsilon,
/// both from x0 under common noise. Path i reuses the same noise for every eps.
std::vector<ApproximationRow> approximation_study(const SddeModel& model, const MollifiedFamily& mollified,
                                                  const Segment& x0, const ApproximationConfig& config);

/// Constant segments at +-10^{-k/20}, k = 0..160, and a uniform sweep of
/// [-range, range]; enough to resolve kinks of scalar drifts near the origin.
std::vector<Segment> constant_probe_cloud(const TimeGrid& grid, std::size_t dim, double range = 3.0);

}  // namespace sdde
