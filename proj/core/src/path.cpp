#include "sdde/path.hpp"

#include <string>

#include "sdde/error.hpp"

namespace sdde {

PathGrid::PathGrid(const Segment& init, std::size_t noise_dim, std::size_t reserve_steps)
    : dim_(init.dim()), noise_dim_(noise_dim), delay_steps_(init.delay_steps()), dt_(init.dt()) {
  if (noise_dim_ == 0) throw DomainError("noise dimension must be positive");
  states_.reserve((delay_steps_ + 1 + reserve_steps) * dim_);
  increments_.reserve(reserve_steps * noise_dim_);
  auto v = init.values();
  states_.assign(v.begin(), v.end());
}

std::span<const double> PathGrid::state_at_step(std::size_t k) const {
  if (k > steps()) throw DomainError("step " + std::to_string(k) + " beyond path length " + std::to_string(steps()));
  return {states_.data() + (delay_steps_ + k) * dim_, dim_};
}

std::span<const double> PathGrid::increment(std::size_t k) const {
  if (k >= steps()) throw DomainError("no increment recorded for step " + std::to_string(k));
  return {increments_.data() + k * noise_dim_, noise_dim_};
}

SegmentView PathGrid::segment_view(std::size_t k) const {
  if (k > steps()) throw DomainError("segment index " + std::to_string(k) + " beyond path length " + std::to_string(steps()));
  return {states_.data() + k * dim_, dim_, delay_steps_, dt_};
}

Segment PathGrid::segment_at(std::size_t k) const { return Segment::from_view(segment_view(k)); }

void PathGrid::append(std::span<const double> state, std::span<const double> dW) {
  if (state.size() != dim_ || dW.size() != noise_dim_) throw DomainError("append: dimension mismatch");
  states_.insert(states_.end(), state.begin(), state.end());
  increments_.insert(increments_.end(), dW.begin(), dW.end());
}

}  // namespace sdde
