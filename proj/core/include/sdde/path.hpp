#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdde/grid.hpp"

namespace sdde {

/// A simulated trajectory from time -r onward together with the Brownian
/// increments that produced it. The first delay_steps + 1 states are the
/// initial segment; every later state has exactly one increment.
class PathGrid {
 public:
  PathGrid() = default;
  PathGrid(const Segment& init, std::size_t noise_dim, std::size_t reserve_steps = 0);

  std::size_t dim() const { return dim_; }
  std::size_t noise_dim() const { return noise_dim_; }
  std::size_t delay_steps() const { return delay_steps_; }
  double dt() const { return dt_; }
  /// Number of completed integration steps.
  std::size_t steps() const { return increments_.size() / (noise_dim_ == 0 ? 1 : noise_dim_); }
  TimeGrid grid() const { return {dt_, delay_steps_, steps()}; }

  /// State at integration step k (k = 0 is time 0).
  std::span<const double> state_at_step(std::size_t k) const;
  std::span<const double> increment(std::size_t k) const;
  std::span<const double> increments() const { return increments_; }
  std::span<const double> states() const { return states_; }

  /// Segment ending at step k, as a view into this path (valid while the path lives
  /// and is not appended to).
  SegmentView segment_view(std::size_t k) const;
  /// Copy of the segment ending at step k. Throws DomainError when k > steps().
  Segment segment_at(std::size_t k) const;

  void append(std::span<const double> state, std::span<const double> dW);

 private:
  std::size_t dim_ = 0;
  std::size_t noise_dim_ = 0;
  std::size_t delay_steps_ = 0;
  double dt_ = 0.0;
  std::vector<double> states_;
  std::vector<double> increments_;
};

}  // namespace sdde
