#include "sdde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdde/error.hpp"

namespace sdde {

std::size_t exact_steps(double time, double dt, const char* what) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("dt must be positive and finite");
  }
  if (!(time >= 0.0) || !std::isfinite(time)) {
    throw DomainError(std::string(what) + " must be non-negative and finite");
  }
  const double q = time / dt;
  const double k = std::round(q);
  if (std::abs(q - k) > 1e-9 * std::max(1.0, std::abs(q))) {
    throw DomainError(std::string(what) + " = " + std::to_string(time) +
                      " is not an exact multiple of dt = " + std::to_string(dt));
  }
  return static_cast<std::size_t>(k);
}

TimeGrid TimeGrid::from_times(double dt, double r, double horizon) {
  TimeGrid g;
  g.dt = dt;
  g.delay_steps = exact_steps(r, dt, "r");
  g.horizon_steps = exact_steps(horizon, dt, "horizon");
  g.validate();
  return g;
}

std::size_t TimeGrid::steps_for(double time) const { return exact_steps(time, dt, "time"); }

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (delay_steps == 0) throw DomainError("delay window must contain at least one step");
  if (horizon_steps == 0) throw DomainError("horizon must contain at least one step");
}

double SegmentView::sup_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0.0;
    for (double v : point(i)) s += v * v;
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

Segment::Segment(std::size_t dim, std::size_t delay_steps, double dt)
    : dim_(dim), delay_steps_(delay_steps), dt_(dt), values_((delay_steps + 1) * dim, 0.0) {}

Segment::Segment(std::size_t dim, std::size_t delay_steps, double dt, std::vector<double> values)
    : dim_(dim), delay_steps_(delay_steps), dt_(dt), values_(std::move(values)) {
  if (values_.size() != (delay_steps_ + 1) * dim_) {
    throw DomainError("segment storage has " + std::to_string(values_.size()) +
                      " entries, expected " + std::to_string((delay_steps_ + 1) * dim_));
  }
}

Segment Segment::constant(const TimeGrid& grid, std::span<const double> value) {
  Segment s(value.size(), grid.delay_steps, grid.dt);
  for (std::size_t i = 0; i < s.size(); ++i) std::copy(value.begin(), value.end(), s.point(i).begin());
  return s;
}

Segment Segment::sampled(const TimeGrid& grid, std::size_t dim,
                         const std::function<void(double, std::span<double>)>& fn) {
  Segment s(dim, grid.delay_steps, grid.dt);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double t = -grid.r() + static_cast<double>(i) * grid.dt;
    fn(t, s.point(i));
  }
  return s;
}

Segment Segment::from_view(SegmentView v) {
  auto vals = v.values();
  return Segment(v.dim(), v.delay_steps(), v.dt(), std::vector<double>(vals.begin(), vals.end()));
}

Segment& Segment::operator+=(const Segment& other) {
  require_same_grid(view(), other.view());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Segment& Segment::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Segment operator+(Segment a, const Segment& b) { return a += b; }
Segment operator*(double s, Segment a) { return a *= s; }

void require_same_grid(SegmentView x, SegmentView y) {
  if (x.dim() != y.dim() || x.delay_steps() != y.delay_steps() || x.dt() != y.dt()) {
    throw GridMismatch("segments live on different grids (dim " + std::to_string(x.dim()) + "/" +
                       std::to_string(y.dim()) + ", delay steps " + std::to_string(x.delay_steps()) +
                       "/" + std::to_string(y.delay_steps()) + ")");
  }
}

double sup_dist(SegmentView x, SegmentView y) {
  require_same_grid(x, y);
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto a = x.point(i);
    auto b = y.point(i);
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
      const double d = a[c] - b[c];
      s += d * d;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace sdde
