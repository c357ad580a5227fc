#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "sdde/error.hpp"
#include "sdde/grid.hpp"
#include "sdde/model.hpp"
#include "sdde/path.hpp"

namespace sdde {

/// Drift or diffusion produced NaN/Inf. Carries the segment it was evaluated on.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, Segment segment, std::ptrdiff_t step = -1);
  const Segment& segment() const { return segment_; }
  /// Integration step at which it happened, or -1 for a single em_step call.
  std::ptrdiff_t step() const { return step_; }

 private:
  Segment segment_;
  std::ptrdiff_t step_;
};

/// Source of Brownian increments, one m-vector per step.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual void next(std::span<double> dW) = 0;
};

/// i.i.d. N(0, dt I_m) increments from a 64-bit Mersenne twister.
class GaussianNoise final : public NoiseSource {
 public:
  GaussianNoise(std::uint64_t seed, double dt);
  void next(std::span<double> dW) override;

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  double scale_;
};

/// Replays recorded increments; throws DomainError once exhausted.
class ReplayNoise final : public NoiseSource {
 public:
  explicit ReplayNoise(std::span<const double> increments) : data_(increments) {}
  void next(std::span<double> dW) override;

 private:
  std::span<const double> data_;
  std::size_t pos_ = 0;
};

/// Per-step additive drift: control(step, current segment, out).
using ControlFn = std::function<void(std::size_t step, SegmentView x, std::span<double> out)>;

/// Reusable scratch space for Euler-Maruyama steps of one model.
class EulerMaruyama {
 public:
  explicit EulerMaruyama(const SddeModel& model);

  /// out = x(0) + (a(x) + extra_drift) dt + sigma(x) dW. `extra_drift` may be empty.
  void step(SegmentView x, std::span<const double> dW, double dt,
            std::span<const double> extra_drift, std::span<double> out);

  /// sigma(x) evaluated by the last step(), row-major n x m.
  std::span<const double> last_diffusion() const { return sigma_; }

 private:
  const SddeModel* model_;
  std::vector<double> drift_;
  std::vector<double> sigma_;
};

/// One Euler-Maruyama step of the (optionally controlled) equation.
std::vector<double> em_step(const SddeModel& model, SegmentView x, std::span<const double> dW,
                            double dt, std::span<const double> extra_drift = {});

/// Integrates `steps` Euler-Maruyama steps from `init`, recording every increment.
/// Deterministic given the noise stream.
PathGrid em_simulate(const SddeModel& model, const Segment& init, std::size_t steps,
                     NoiseSource& noise, const ControlFn& control = {});

}  // namespace sdde
