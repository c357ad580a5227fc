#include "sdde/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "sdde/error.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"
#include "sdde/stats.hpp"

namespace sdde {

void TailBoundSpec::validate() const {
  if (!(A >= 0)) throw DomainError("tail bound needs A >= 0");
  if (!(B > 0)) throw DomainError("tail bound needs B > 0");
  if (!(lambda > 0)) throw DomainError("tail bound needs lambda > 0");
  if (!(delta > 0 && delta < 0.5)) throw DomainError("tail bound needs delta in (0, 1/2)");
  if (!(T > 0)) throw DomainError("tail bound needs T > 0");
}

double lem1_threshold(const TailBoundSpec& spec, double R) {
  spec.validate();
  if (!(R >= 0)) throw DomainError("tail bound needs R >= 0");
  return spec.A / spec.lambda + std::sqrt(spec.B) * std::pow(spec.lambda, -spec.delta) * R;
}

namespace {

std::size_t grid_steps(double T, double dt) {
  if (!(dt > 0) || !(T > 0)) throw DomainError("driver needs T > 0 and dt > 0");
  return static_cast<std::size_t>(std::llround(T / dt));
}

class DeterministicDriver final : public TailDriver {
 public:
  DeterministicDriver(double A, double lambda, double V0, double T, double dt)
      : A_(A), lambda_(lambda), V0_(V0), steps_(grid_steps(T, dt)), dt_(dt) {}

  std::string name() const override { return "deterministic"; }

  TailPath sample(std::uint64_t) const override {
    TailPath p;
    p.dt = dt_;
    const double eq = A_ / lambda_;
    for (std::size_t k = 0; k <= steps_; ++k) {
      const double t = static_cast<double>(k) * dt_;
      const double v = eq + (V0_ - eq) * std::exp(-lambda_ * t);
      p.V.push_back(v);
      if (k < steps_) {
        p.drift.push_back(-lambda_ * v + A_);
        p.variation.push_back(0.0);
      }
    }
    p.tau_step = steps_;
    return p;
  }

 private:
  double A_, lambda_, V0_;
  std::size_t steps_;
  double dt_;
};

class SquaredOuDriver final : public TailDriver {
 public:
  SquaredOuDriver(double s, double lambda, double y0, double cap, double T, double dt)
      : s_(s), lambda_(lambda), y0_(y0), cap_(cap), steps_(grid_steps(T, dt)), dt_(dt) {}

  std::string name() const override { return "squared-ou"; }

  TailPath sample(std::uint64_t seed) const override {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal;
    const double sq = std::sqrt(dt_);
    TailPath p;
    p.dt = dt_;
    double y = y0_;
    p.V.push_back(y * y);
    std::size_t k = 0;
    while (k < steps_ && y * y < cap_) {
      const double v = y * y;
      p.drift.push_back(-lambda_ * v + s_ * s_);
      p.variation.push_back(4.0 * s_ * s_ * v);
      y += -0.5 * lambda_ * y * dt_ + s_ * sq * normal(engine);
      p.V.push_back(y * y);
      ++k;
    }
    p.tau_step = k;
    return p;
  }

 private:
  double s_, lambda_, y0_, cap_;
  std::size_t steps_;
  double dt_;
};

}  // namespace

std::unique_ptr<TailDriver> deterministic_driver(double A, double lambda, double V0, double T, double dt) {
  if (!(lambda > 0) || !(A >= 0) || !(V0 >= 0)) throw DomainError("deterministic driver needs lambda > 0, A, V0 >= 0");
  return std::make_unique<DeterministicDriver>(A, lambda, V0, T, dt);
}

std::unique_ptr<TailDriver> squared_ou_driver(double s, double lambda, double y0, double cap, double T, double dt) {
  if (!(s > 0) || !(lambda > 0) || !(cap > 0)) throw DomainError("squared-OU driver needs s, lambda, cap > 0");
  return std::make_unique<SquaredOuDriver>(s, lambda, y0, cap, T, dt);
}

TailCheckReport lem1_empirical_check(const TailDriver& driver, const TailBoundSpec& spec,
                                     std::span<const double> R_grid, std::size_t n_paths, std::uint64_t seed,
                                     std::size_t workers) {
  spec.validate();
  if (R_grid.empty()) throw DomainError("tail check needs a nonempty R grid");
  std::vector<double> thresholds;
  for (double R : R_grid) thresholds.push_back(lem1_threshold(spec, R));

  // Per path: the sup statistic, or nothing when the path breaks the hypotheses.
  const auto stats = parallel_map(n_paths, workers, [&](std::size_t i) -> std::optional<double> {
    const TailPath p = driver.sample(derive_seed(seed, i, StreamTag::base_noise));
    if (p.V.empty() || p.tau_step >= p.V.size()) return std::nullopt;
    if (static_cast<double>(p.tau_step) * p.dt > spec.T * (1 + 1e-12)) return std::nullopt;
    for (std::size_t k = 0; k < p.tau_step; ++k) {
      if (p.V[k] < 0) return std::nullopt;
      const double cap = -spec.lambda * p.V[k] + spec.A;
      if (p.drift[k] > cap + 1e-12 * (1 + std::abs(cap))) return std::nullopt;
      if (p.variation[k] > spec.B * (1 + 1e-12)) return std::nullopt;
    }
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= p.tau_step; ++k) {
      const double t = static_cast<double>(k) * p.dt;
      sup = std::max(sup, p.V[k] - std::exp(-spec.lambda * t) * p.V[0]);
    }
    return sup;
  });

  TailCheckReport report;
  for (const auto& s : stats) (s ? report.used : report.discarded) += 1;
  if (report.used == 0) throw DomainError("every path of driver '" + driver.name() + "' broke the declared hypotheses");

  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < R_grid.size(); ++r) {
    TailRow row;
    row.R = R_grid[r];
    row.threshold = thresholds[r];
    for (const auto& s : stats)
      if (s && *s > row.threshold) ++row.exceed;
    row.frequency = static_cast<double>(row.exceed) / static_cast<double>(report.used);
    if (row.exceed > 0) {
      xs.push_back(row.R * row.R);
      ys.push_back(std::log(row.frequency));
    }
    report.rows.push_back(row);
  }
  if (xs.size() >= 3) {
    const auto fit = linear_fit(xs, ys);
    report.fit_valid = true;
    report.slope = fit.slope;
    report.slope_ci95 = fit.slope_ci95();
    report.intercept = fit.intercept;
  }
  report.note = "stopping is detected on the grid and may overshoot by one step";
  return report;
}

}  // namespace sdde
