#include "sdde/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sdde {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double frobenius_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

bool exceeds(double lhs, double rhs) { return lhs > rhs + 1e-12 * (1.0 + std::abs(rhs)); }

struct PointEval {
  std::vector<double> drift;
  std::vector<double> sigma;
};

PointEval evaluate(const SddeModel& m, SegmentView x) {
  PointEval e{std::vector<double>(m.dim_state), std::vector<double>(m.dim_state * m.dim_noise)};
  m.drift(x, e.drift);
  m.diffusion(x, e.sigma);
  return e;
}

void check_point(const SddeModel& model, SegmentView x, const PointEval& e, AssumptionReport& rep) {
  const std::size_t n = model.dim_state;
  const std::size_t m = model.dim_noise;
  const double C = model.holder.constant;
  ++rep.points_checked;

  const double norm = x.sup_norm();
  if (exceeds(dot(e.drift, x.now()), C * (1.0 + norm * norm))) ++rep.growth_violations;

  if (!model.has_inverse()) return;
  std::vector<double> inv(m * n);
  model.diffusion_right_inverse(x, inv);
  bool bad = false;
  double fro = 0.0;
  for (double v : inv) fro += v * v;
  fro = std::sqrt(fro);
  if (model.holder.inverse_bound && exceeds(fro, *model.holder.inverse_bound)) bad = true;
  for (std::size_t i = 0; i < n && !bad; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += e.sigma[i * m + k] * inv[k * n + j];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-10) {
        bad = true;
        break;
      }
    }
  }
  if (bad || !std::isfinite(fro)) ++rep.nondegeneracy_violations;
}

}  // namespace

AssumptionReport verify_assumptions(const SddeModel& model, const std::vector<SegmentPair>& probes) {
  AssumptionReport rep;
  const double C = model.holder.constant;
  for (const auto& [x, y] : probes) {
    const PointEval ex = evaluate(model, x);
    const PointEval ey = evaluate(model, y);
    check_point(model, x, ex, rep);
    check_point(model, y, ey, rep);

    const double d = sup_dist(x, y);
    if (d > 1.0 || d == 0.0) continue;
    ++rep.pairs_checked;

    std::vector<double> da(model.dim_state);
    std::vector<double> dx(model.dim_state);
    for (std::size_t i = 0; i < da.size(); ++i) {
      da[i] = ex.drift[i] - ey.drift[i];
      dx[i] = x.now()[i] - y.now()[i];
    }
    const double lhs = dot(da, dx);
    const double rhs = C * std::pow(d, model.holder.alpha + 1.0);
    rep.worst_one_sided_ratio = std::max(rep.worst_one_sided_ratio, lhs / std::pow(d, model.holder.alpha + 1.0));
    if (exceeds(lhs, rhs)) ++rep.one_sided_holder_violations;

    const double ds = frobenius_diff(ex.sigma, ey.sigma);
    rep.worst_diffusion_ratio = std::max(rep.worst_diffusion_ratio, ds / std::pow(d, model.holder.beta));
    if (exceeds(ds, C * std::pow(d, model.holder.beta))) ++rep.diffusion_holder_violations;
  }
  return rep;
}

std::vector<SegmentPair> standard_probe_pairs(const TimeGrid& grid, std::size_t dim, std::size_t count,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_shape = [&](double offset_range, double amplitude) {
    std::vector<double> off(dim), amp(dim), freq(dim), phase(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      off[c] = offset_range * (2.0 * unit(rng) - 1.0);
      amp[c] = amplitude * unit(rng);
      freq[c] = 0.5 + 4.0 * unit(rng);
      phase[c] = 2.0 * std::numbers::pi * unit(rng);
    }
    return Segment::sampled(grid, dim, [&](double t, std::span<double> out) {
      for (std::size_t c = 0; c < dim; ++c) out[c] = off[c] + amp[c] * std::sin(freq[c] * t + phase[c]);
    });
  };

  std::vector<SegmentPair> pairs;
  pairs.reserve(count + 40);
  for (std::size_t i = 0; i < count; ++i) {
    Segment x = random_shape(3.0, 1.0);
    Segment dir = random_shape(1.0, 1.0);
    const double nd = dir.view().sup_norm();
    if (nd > 0.0) dir *= 1.0 / nd;
    const double scale = std::pow(10.0, -6.0 * unit(rng));
    Segment y = x + scale * dir;
    pairs.emplace_back(std::move(x), std::move(y));
  }
  // Near the origin, where Hoelder-type drifts are steepest.
  for (int k = 0; k <= 12; ++k) {
    const double u = std::pow(10.0, -0.5 * k);
    std::vector<double> plus(dim, u), minus(dim, -u), half(dim, 0.5 * u), zero(dim, 0.0);
    pairs.emplace_back(Segment::constant(grid, plus), Segment::constant(grid, zero));
    pairs.emplace_back(Segment::constant(grid, plus), Segment::constant(grid, minus));
    pairs.emplace_back(Segment::constant(grid, plus), Segment::constant(grid, half));
  }
  return pairs;
}

}  // namespace sdde
