#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sdde/girsanov.hpp"
#include "sdde/grid.hpp"
#include "sdde/integrator.hpp"
#include "sdde/model.hpp"
#include "sdde/path.hpp"

namespace sdde {

/// Truncated Hoelder metric d_{N,gamma}(x, y) = min(N |x - y|^gamma, 1).
struct MetricSpec {
  double N = 1.0;
  double gamma = 1.0;
  void validate() const;
};

double d_metric(SegmentView x, SegmentView y, const MetricSpec& spec);

enum class LedgerMode { without_ledger, with_ledger };

/// Control chi(t) = upsilon^{gamma-1} (X(t) - Y(t)) applied until
/// |X - Y| first reaches threshold_mult * upsilon on the grid.
struct ControlSpec {
  double gamma = 0.5;
  double threshold_mult = 2.0;
  LedgerMode mode = LedgerMode::with_ledger;
};

/// Two paths driven by one noise stream; Y may carry an additive control.
struct CoupledRun {
  static constexpr std::size_t kNeverStopped = std::numeric_limits<std::size_t>::max();

  PathGrid path_x;
  PathGrid path_y;
  /// chi at each step, row-major steps x n. Zero from tau_step on.
  std::vector<double> control_record;
  std::size_t tau_step = kNeverStopped;
  double upsilon = 0.0;
  double gain = 0.0;
  GirsanovLedger ledger;
  std::vector<std::string> warnings;

  bool stopped() const { return tau_step != kNeverStopped; }
  std::size_t steps() const { return path_x.steps(); }
  std::span<const double> control(std::size_t k) const;
  /// max_k |chi(t_k)|
  double max_control_norm() const;
};

/// Low-level engine shared by the coupling constructions: X follows `model_x`
/// from x, Y follows `model_y` from y plus gain * (X - Y) until the first grid
/// step where |X - Y| >= threshold. gain == 0 gives the synchronous coupling.
/// With `ledger`, eta = sigma_y(Y_t)^{-1} chi is booked with density exponent
/// -eta, so that E[f(Y) exp(log_exponent)] = E f(uncontrolled Y).
CoupledRun run_coupled_pair(const SddeModel& model_x, const SddeModel& model_y, const Segment& x,
                            const Segment& y, std::size_t steps, NoiseSource& noise, double gain,
                            double threshold, bool ledger);

/// Same noise, no control. tau_step stays at kNeverStopped and the ledger is empty.
CoupledRun run_synchronous(const SddeModel& model, const Segment& x, const Segment& y, std::size_t steps,
                           NoiseSource& noise);

/// Controlled (generalized) coupling with upsilon = |x - y|. Falls back to the
/// synchronous coupling, with a warning, when x == y.
CoupledRun run_controlled(const SddeModel& model, const Segment& x, const Segment& y, const ControlSpec& spec,
                          std::size_t steps, NoiseSource& noise);

struct BatchOptions {
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Path i uses GaussianNoise(derive_seed(seed, i, base_noise)).
std::vector<CoupledRun> run_synchronous_batch(const SddeModel& model, const Segment& x, const Segment& y,
                                              std::size_t steps, const BatchOptions& batch);
std::vector<CoupledRun> run_controlled_batch(const SddeModel& model, const Segment& x, const Segment& y,
                                             const ControlSpec& spec, std::size_t steps,
                                             const BatchOptions& batch);

struct ContractionEstimate {
  double exceed_prob = 0.0;  // P(|X_h - Y_h| >= theta |x - y|)
  double mean_ratio = 0.0;   // E |X_h - Y_h| / |x - y|
  double mean_kl = 0.0;
  double tv_bound = 0.0;     // Pinsker bound at mean_kl
  bool degenerate = false;   // x == y: ratio undefined, reported as 0
  std::size_t n = 0;
};

ContractionEstimate contraction_estimate(std::span<const CoupledRun> runs, double h, double theta);

struct N0Bound {
  double n1 = 0.0;  // upsilon0^{-gamma}
  double n2 = 0.0;  // (C_p + C_tv) / (theta1 - theta^gamma)
  double n0 = 0.0;  // max(n1, n2)
};

/// Threshold N0 beyond which d_{N,gamma} contracts by theta1 near the diagonal,
/// given a TV constant C_tv, tail constant C_p and range upsilon0.
N0Bound n0_bound(double theta, double theta1, double gamma, double C_tv, double C_p, double upsilon0);

}  // namespace sdde
