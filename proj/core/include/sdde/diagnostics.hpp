#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sdde {

/// Hypotheses of the tail bound: V >= 0 with drift <= -lambda V + A and
/// quadratic-variation rate <= B up to a stopping time tau <= T.
struct TailBoundSpec {
  double A = 0.0;
  double B = 1.0;
  double lambda = 1.0;
  double delta = 0.25;
  double T = 1.0;
  void validate() const;
};

/// A / lambda + sqrt(B) lambda^{-delta} R.
double lem1_threshold(const TailBoundSpec& spec, double R);

/// One sampled V path on a uniform grid. drift[k] and variation[k] are the
/// coefficients used on step k -> k+1; tau_step is the last index that counts.
struct TailPath {
  double dt = 0.0;
  std::vector<double> V;
  std::vector<double> drift;
  std::vector<double> variation;
  std::size_t tau_step = 0;
};

class TailDriver {
 public:
  virtual ~TailDriver() = default;
  virtual std::string name() const = 0;
  virtual TailPath sample(std::uint64_t seed) const = 0;
};

/// dV = (-lambda V + A) dt from V0, no martingale part (exact flow on the grid).
std::unique_ptr<TailDriver> deterministic_driver(double A, double lambda, double V0, double T, double dt);

/// V = Y^2 with dY = -(lambda/2) Y dt + s dW, Y(0) = y0, stopped on the grid at
/// the first step where V >= cap or at T. Conforms with A = s^2 and B = 4 s^2 cap.
std::unique_ptr<TailDriver> squared_ou_driver(double s, double lambda, double y0, double cap, double T, double dt);

struct TailRow {
  double R = 0.0;
  double threshold = 0.0;
  std::size_t exceed = 0;
  double frequency = 0.0;
};

struct TailCheckReport {
  std::vector<TailRow> rows;
  std::size_t used = 0;
  std::size_t discarded = 0;
  /// Fit of log frequency against R^2 over rows with positive frequency.
  bool fit_valid = false;
  double slope = 0.0;
  double slope_ci95 = 0.0;
  double intercept = 0.0;
  std::string note;
};

/// Empirical exceedance frequencies P(sup_{t <= tau} V(t) - e^{-lambda t} V(0) > threshold(R)).
/// Paths whose recorded coefficients break the declared A, B, lambda on any
/// step before tau are discarded and counted. Throws DomainError if all are.
TailCheckReport lem1_empirical_check(const TailDriver& driver, const TailBoundSpec& spec,
                                     std::span<const double> R_grid, std::size_t n_paths, std::uint64_t seed,
                                     std::size_t workers = 1);

}  // namespace sdde
