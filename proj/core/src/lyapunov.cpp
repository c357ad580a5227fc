#include "sdde/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "sdde/error.hpp"
#include "sdde/integrator.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"
#include "sdde/stats.hpp"

namespace sdde {

double PhiFunction::operator()(double v) const {
  switch (shape) {
    case Shape::linear:
      return c * v;
    case Shape::log_power:
      return c * v * std::pow(std::log(v) + b, q);
    case Shape::power:
      return a * std::pow(v, 1.0 - 2.0 / p);
    case Shape::generic:
      break;
  }
  return generic(v);
}

PhiFunction PhiFunction::linear(double c) {
  if (!(c > 0)) throw DomainError("phi(v) = c v needs c > 0");
  PhiFunction f;
  f.shape = Shape::linear;
  f.c = c;
  return f;
}

PhiFunction PhiFunction::log_power(double c, double b, double q) {
  if (!(c > 0) || !(b > 0)) throw DomainError("phi(v) = c v (ln v + b)^q needs c > 0 and b > 0");
  if (!(b + q > 0)) throw DomainError("phi(v) = c v (ln v + b)^q is not increasing on [1, inf) unless b + q > 0");
  if (!(q < 1)) throw DomainError("phi(v) = c v (ln v + b)^q needs q < 1");
  PhiFunction f;
  f.shape = Shape::log_power;
  f.c = c;
  f.b = b;
  f.q = q;
  return f;
}

PhiFunction PhiFunction::power(double a, double p) {
  if (!(a > 0) || !(p > 2)) throw DomainError("phi(v) = a v^{1-2/p} needs a > 0 and p > 2");
  PhiFunction f;
  f.shape = Shape::power;
  f.a = a;
  f.p = p;
  return f;
}

PhiFunction PhiFunction::from_function(std::function<double(double)> fn) {
  if (!fn) throw DomainError("phi function is empty");
  PhiFunction f;
  f.shape = Shape::generic;
  f.generic = std::move(fn);
  return f;
}

namespace {

void check_phi_positive(const PhiFunction& phi) {
  double prev = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double v = std::pow(10.0, 0.1 * k);
    const double value = phi(v);
    if (!(value > 0) || !std::isfinite(value))
      throw DomainError("phi is not positive at v = " + std::to_string(v));
    if (k > 0 && !(value > prev)) throw DomainError("phi is not increasing near v = " + std::to_string(v));
    prev = value;
  }
}

// Phi(e^s) for generic phi, integrated in the log variable.
double generic_Phi_log(const PhiFunction& phi, double s) {
  if (s == 0.0) return 0.0;
  auto integrand = [&phi](double u) {
    const double v = std::exp(u);
    return v / phi(v);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, s, 15, 1e-10);
}

double generic_Phi_inv(const PhiFunction& phi, double t) {
  if (t < 0) throw DomainError("Phi^{-1} is defined for t >= 0");
  if (t == 0) return 1.0;
  double hi = 1.0;
  while (generic_Phi_log(phi, hi) < t) {
    hi *= 2.0;
    if (hi > 700.0) throw DomainError("Phi^{-1}(" + std::to_string(t) + ") exceeds the representable range");
  }
  auto g = [&](double s) { return generic_Phi_log(phi, s) - t; };
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  const auto bracket = boost::math::tools::bisect(g, 0.0, hi, tol);
  return std::exp(0.5 * (bracket.first + bracket.second));
}

}  // namespace

RateFunctions rate_functions(const PhiFunction& phi) {
  check_phi_positive(phi);
  RateFunctions rf;
  switch (phi.shape) {
    case PhiFunction::Shape::linear: {
      const double c = phi.c;
      rf.Phi = [c](double v) { return std::log(v) / c; };
      rf.Phi_inv = [c](double t) { return std::exp(c * t); };
      rf.r = [c](double t) { return c * std::exp(c * t); };
      break;
    }
    case PhiFunction::Shape::log_power: {
      const double c = phi.c, b = phi.b, e = 1.0 - phi.q;
      rf.Phi = [=](double v) { return (std::pow(std::log(v) + b, e) - std::pow(b, e)) / (c * e); };
      rf.Phi_inv = [=](double t) { return std::exp(std::pow(c * e * t + std::pow(b, e), 1.0 / e) - b); };
      break;
    }
    case PhiFunction::Shape::power: {
      const double a = phi.a, p = phi.p;
      rf.Phi = [=](double v) { return p / (2.0 * a) * (std::pow(v, 2.0 / p) - 1.0); };
      rf.Phi_inv = [=](double t) { return std::pow(1.0 + 2.0 * a * t / p, p / 2.0); };
      rf.r = [=](double t) { return a * std::pow(1.0 + 2.0 * a * t / p, p / 2.0 - 1.0); };
      break;
    }
    case PhiFunction::Shape::generic: {
      rf.Phi = [phi](double v) {
        if (!(v >= 1)) throw DomainError("Phi is defined for v >= 1");
        return generic_Phi_log(phi, std::log(v));
      };
      rf.Phi_inv = [phi](double t) { return generic_Phi_inv(phi, t); };
      break;
    }
  }
  if (!rf.r) rf.r = [phi, inv = rf.Phi_inv](double t) { return phi(inv(t)); };
  return rf;
}

double rate_bound(double t, double V_x, const RateFunctions& rates, const PhiFunction& phi, double delta, double c,
                  double C) {
  if (!(delta > 0 && delta < 1)) throw DomainError("rate_bound needs delta in (0, 1)");
  if (!(c > 0) || !(C > 0)) throw DomainError("rate_bound needs c > 0 and C > 0");
  if (!(t >= 0)) throw DomainError("rate_bound needs t >= 0");
  if (!(V_x >= 1)) throw DomainError("rate_bound needs V(x) >= 1");
  return C * std::pow(phi(V_x), delta) / std::pow(rates.r(c * t), delta);
}

EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> distances, double V_x,
                         const RateFunctions& rates, const PhiFunction& phi, double delta) {
  if (times.size() != distances.size() || times.empty()) throw DomainError("envelope fit needs matching nonempty data");
  bool any_positive = false;
  for (double d : distances) any_positive = any_positive || d > 0;
  if (!any_positive) throw DomainError("envelope fit needs at least one positive distance");

  const double scale = std::pow(phi(V_x), delta);
  EnvelopeFit best;
  double best_gap = std::numeric_limits<double>::infinity();
  constexpr int kGrid = 400;
  for (int k = 0; k <= kGrid; ++k) {
    const double c = std::pow(10.0, -4.0 + 5.0 * k / kGrid);
    std::vector<double> denom(times.size());
    double C = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
      denom[i] = std::pow(rates.r(c * times[i]), delta);
      finite = finite && std::isfinite(denom[i]);
      C = std::max(C, distances[i] * denom[i] / scale);
    }
    if (!finite || !(C > 0)) continue;
    double gap = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (distances[i] <= 0) continue;
      gap += std::log(C * scale / denom[i] / distances[i]);
      ++used;
    }
    gap /= static_cast<double>(used);
    if (gap < best_gap) {
      best_gap = gap;
      best = {c, C};
    }
  }
  if (!(best.C > 0)) throw DomainError("envelope fit found no finite candidate");
  return best;
}

double case_iii_p_limit(double A, double Lambda, double sigma_sup_sq) {
  if (!(sigma_sup_sq > 0)) throw DomainError("sup |sigma|^2 must be positive");
  return 2.0 + (2.0 * A - Lambda) / sigma_sup_sq;
}

LyapunovSpec lyapunov_catalog(double kappa, const LyapunovParams& params) {
  if (!(kappa >= -1)) throw DomainError("Lyapunov catalog needs kappa >= -1");
  if (!(params.alpha > 0)) throw DomainError("Lyapunov catalog needs alpha > 0");
  LyapunovSpec spec;
  spec.C_V = params.C_V;
  spec.h = params.h;
  const double alpha = params.alpha;
  if (kappa >= 0) {
    spec.catalog_case = 1;
    spec.V = [alpha](SegmentView x) { return std::exp(alpha * std::abs(x.now()[0])); };
    spec.phi = PhiFunction::linear(params.c);
  } else if (kappa > -1) {
    spec.catalog_case = 2;
    const double q = 2.0 * kappa / (kappa + 1.0);
    const double e = kappa + 1.0;
    spec.V = [alpha, e](SegmentView x) { return std::exp(alpha * std::pow(std::abs(x.now()[0]), e)); };
    spec.phi = PhiFunction::log_power(params.c, params.b.value_or(1.0 - q), q);
  } else {
    spec.catalog_case = 3;
    if (!(2.0 * params.A > params.Lambda))
      throw DomainError("kappa = -1 needs 2 A > Lambda, got A = " + std::to_string(params.A) +
                        ", Lambda = " + std::to_string(params.Lambda));
    const double limit = case_iii_p_limit(params.A, params.Lambda, params.sigma_sup_sq);
    if (!(params.p > 2 && params.p < limit))
      throw DomainError("kappa = -1 needs 2 < p < " + std::to_string(limit) + ", got p = " + std::to_string(params.p));
    const double p = params.p;
    spec.V = [p](SegmentView x) { return 1.0 + std::pow(std::abs(x.now()[0]), p); };
    spec.phi = PhiFunction::power(params.a, p);
  }
  return spec;
}

bool LyapunovReport::all_pass() const {
  return std::all_of(probes.begin(), probes.end(), [](const auto& p) { return p.pass; });
}

LyapunovReport lyapunov_drift_check(const SddeModel& model, const LyapunovSpec& spec,
                                    std::span<const Segment> probe_points, std::size_t paths_per_point,
                                    std::uint64_t seed, std::size_t workers) {
  if (!spec.V) throw DomainError("Lyapunov spec has no V");
  if (paths_per_point < 2) throw DomainError("drift check needs at least two paths per probe");
  LyapunovReport report;
  for (std::size_t p = 0; p < probe_points.size(); ++p) {
    const Segment& x = probe_points[p];
    const std::size_t h_steps = exact_steps(spec.h, x.dt(), "Lyapunov step h");
    const double Vx = spec.V(x);
    if (!(Vx >= 1)) throw DomainError("V(x) = " + std::to_string(Vx) + " < 1 at probe " + std::to_string(p));
    const std::uint64_t probe_seed = derive_seed(seed, p, StreamTag::probes);
    const auto values = parallel_map(paths_per_point, workers, [&](std::size_t i) {
      GaussianNoise noise(derive_seed(probe_seed, i, StreamTag::base_noise), x.dt());
      const PathGrid path = em_simulate(model, x, h_steps, noise);
      const double v = spec.V(path.segment_view(h_steps));
      if (!(v >= 1)) throw DomainError("V returned " + std::to_string(v) + " < 1 on a simulated segment");
      return v - Vx;
    });
    const auto est = mean_estimate(values);
    LyapunovProbeResult row;
    row.V_x = Vx;
    row.drift_mean = est.mean;
    row.ci95 = 1.96 * est.std_error;
    row.rhs = -spec.phi(Vx) + spec.C_V;
    row.pass = row.drift_mean + row.ci95 <= row.rhs;
    report.probes.push_back(row);
  }
  return report;
}

}  // namespace sdde
