#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sdde {

/// Uniform time grid. The delay window r is exactly delay_steps * dt and a
/// segment always holds delay_steps + 1 grid points.
struct TimeGrid {
  double dt = 0.01;
  std::size_t delay_steps = 100;
  std::size_t horizon_steps = 1;

  /// Builds a grid from physical times; r and horizon must be exact multiples
  /// of dt (relative tolerance 1e-9), otherwise DomainError.
  static TimeGrid from_times(double dt, double r, double horizon);

  double r() const { return static_cast<double>(delay_steps) * dt; }
  double horizon() const { return static_cast<double>(horizon_steps) * dt; }
  std::size_t segment_points() const { return delay_steps + 1; }

  /// Number of dt-steps in `time`. Throws DomainError when `time` is not on the grid.
  std::size_t steps_for(double time) const;

  void validate() const;
};

/// Converts a time span into an integral number of steps of size dt, rejecting
/// anything that is not an exact multiple.
std::size_t exact_steps(double time, double dt, const char* what);

/// Non-owning view of a segment: delay_steps + 1 consecutive states of
/// dimension `dim`, ordered from time -r (index 0) to time 0 (index delay_steps).
class SegmentView {
 public:
  SegmentView(const double* data, std::size_t dim, std::size_t delay_steps, double dt)
      : data_(data), dim_(dim), delay_steps_(delay_steps), dt_(dt) {}

  std::size_t dim() const { return dim_; }
  std::size_t delay_steps() const { return delay_steps_; }
  std::size_t size() const { return delay_steps_ + 1; }
  double dt() const { return dt_; }
  double r() const { return static_cast<double>(delay_steps_) * dt_; }

  /// State at grid index i (0 is time -r).
  std::span<const double> point(std::size_t i) const { return {data_ + i * dim_, dim_}; }
  /// x(0)
  std::span<const double> now() const { return point(delay_steps_); }
  /// x(-r)
  std::span<const double> delayed() const { return point(0); }
  /// State at relative time -lag_steps * dt.
  std::span<const double> lagged(std::size_t lag_steps) const { return point(delay_steps_ - lag_steps); }

  double operator()(std::size_t i, std::size_t c) const { return data_[i * dim_ + c]; }
  std::span<const double> values() const { return {data_, size() * dim_}; }

  /// max over grid points of the Euclidean norm.
  double sup_norm() const;

 private:
  const double* data_;
  std::size_t dim_;
  std::size_t delay_steps_;
  double dt_;
};

/// Owning segment of the segment process: an element of C([-r,0], R^n)
/// sampled on the grid.
class Segment {
 public:
  Segment() = default;
  Segment(std::size_t dim, std::size_t delay_steps, double dt);
  Segment(std::size_t dim, std::size_t delay_steps, double dt, std::vector<double> values);

  static Segment constant(const TimeGrid& grid, std::span<const double> value);
  static Segment constant(const TimeGrid& grid, double value) { return constant(grid, std::span<const double>(&value, 1)); }
  /// Samples fn(t, out) at t = -r, -r + dt, ..., 0.
  static Segment sampled(const TimeGrid& grid, std::size_t dim,
                         const std::function<void(double, std::span<double>)>& fn);
  static Segment from_view(SegmentView v);

  SegmentView view() const { return {values_.data(), dim_, delay_steps_, dt_}; }
  operator SegmentView() const { return view(); }

  std::size_t dim() const { return dim_; }
  std::size_t delay_steps() const { return delay_steps_; }
  std::size_t size() const { return delay_steps_ + 1; }
  double dt() const { return dt_; }

  std::span<double> point(std::size_t i) { return {values_.data() + i * dim_, dim_}; }
  std::span<const double> point(std::size_t i) const { return view().point(i); }
  std::span<const double> now() const { return view().now(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  Segment& operator+=(const Segment& other);
  Segment& operator*=(double s);

  bool operator==(const Segment& other) const = default;

 private:
  std::size_t dim_ = 0;
  std::size_t delay_steps_ = 0;
  double dt_ = 0.0;
  std::vector<double> values_;
};

Segment operator+(Segment a, const Segment& b);
Segment operator*(double s, Segment a);

/// Throws GridMismatch unless both segments share dimension, delay window and dt.
void require_same_grid(SegmentView x, SegmentView y);

/// Discrete sup-norm distance: max over grid points of |x(t_i) - y(t_i)|.
double sup_dist(SegmentView x, SegmentView y);

}  // namespace sdde
