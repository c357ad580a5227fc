#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sdde/grid.hpp"
#include "sdde/model.hpp"

namespace sdde {

/// Concave increasing rate function phi on [1, inf). Catalog shapes carry their
/// parameters so that Phi and its inverse have closed forms.
struct PhiFunction {
  enum class Shape { generic, linear, log_power, power };

  Shape shape = Shape::generic;
  double c = 1.0;         // linear: c v;  log_power: c v (ln v + b)^q
  double b = 1.0;
  double q = 0.0;
  double a = 1.0;         // power: a v^{1 - 2/p}
  double p = 4.0;
  std::function<double(double)> generic;  // used when shape == generic

  double operator()(double v) const;

  static PhiFunction linear(double c);
  static PhiFunction log_power(double c, double b, double q);
  static PhiFunction power(double a, double p);
  static PhiFunction from_function(std::function<double(double)> fn);
};

/// Phi(v) = int_1^v dw / phi(w), its inverse, and r(t) = phi(Phi^{-1}(t)).
struct RateFunctions {
  std::function<double(double)> Phi;
  std::function<double(double)> Phi_inv;
  std::function<double(double)> r;
};

/// Closed forms for catalog shapes; Gauss-Kronrod quadrature in ln v and
/// bisection otherwise. Throws DomainError if phi is not positive on a probe grid.
RateFunctions rate_functions(const PhiFunction& phi);

/// C phi(V_x)^delta / r(c t)^delta: the envelope for the distance to the
/// invariant measure started from x with V(x) = V_x.
double rate_bound(double t, double V_x, const RateFunctions& rates, const PhiFunction& phi, double delta, double c,
                  double C);

struct EnvelopeFit {
  double c = 0.0;
  double C = 0.0;
};

/// Fits (c, C) so that rate_bound dominates every (t_i, d_i): for each c on a
/// log-grid the smallest dominating C is taken, and the c with the smallest
/// mean log-gap wins.
EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> distances, double V_x,
                         const RateFunctions& rates, const PhiFunction& phi, double delta);

/// E_x V(X_h) - V(x) <= -phi(V(x)) + C_V.
struct LyapunovSpec {
  std::function<double(SegmentView)> V;
  PhiFunction phi;
  double C_V = 0.0;
  double h = 2.0;
  int catalog_case = 0;  // 1, 2, 3 for catalog entries, 0 otherwise
};

struct LyapunovParams {
  double alpha = 1.0;       // exponent scale in V for cases (i), (ii)
  double c = 0.5;
  std::optional<double> b;  // case (ii); defaults to 1 - q so that phi is increasing
  double a = 0.5;           // case (iii)
  double p = 3.0;           // case (iii)
  double A = 1.0;           // case (iii): drift constant A_{-1}
  double Lambda = 0.0;      // case (iii): sup |sigma|_F^2 in the dissipativity condition
  double sigma_sup_sq = 1.0;
  double C_V = 1.0;
  double h = 2.0;
};

/// Upper end of the admissible p range for kappa = -1: 2 + (2A - Lambda) / sup|sigma|^2.
double case_iii_p_limit(double A, double Lambda, double sigma_sup_sq);

/// (i) kappa >= 0: V = exp(alpha |x(0)|), phi = c v.
/// (ii) kappa in (-1, 0): V = exp(alpha |x(0)|^{kappa+1}), phi = c v (ln v + b)^{2 kappa/(kappa+1)}.
/// (iii) kappa = -1: V = 1 + |x(0)|^p, phi = a v^{1 - 2/p}, 2 < p < case_iii_p_limit.
LyapunovSpec lyapunov_catalog(double kappa, const LyapunovParams& params);

struct LyapunovProbeResult {
  double V_x = 0.0;
  double drift_mean = 0.0;   // Monte Carlo E_x V(X_h) - V(x)
  double ci95 = 0.0;
  double rhs = 0.0;          // -phi(V(x)) + C_V
  bool pass = false;
};

struct LyapunovReport {
  std::vector<LyapunovProbeResult> probes;
  bool all_pass() const;
};

LyapunovReport lyapunov_drift_check(const SddeModel& model, const LyapunovSpec& spec,
                                    std::span<const Segment> probe_points, std::size_t paths_per_point,
                                    std::uint64_t seed, std::size_t workers = 1);

}  // namespace sdde
