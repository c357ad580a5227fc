#include "sdde/integrator.hpp"

#include <cmath>
#include <string>

namespace sdde {

NonFiniteError::NonFiniteError(const std::string& what, Segment segment, std::ptrdiff_t step)
    : Error(what), segment_(std::move(segment)), step_(step) {}

GaussianNoise::GaussianNoise(std::uint64_t seed, double dt)
    : engine_(seed), normal_(0.0, 1.0), scale_(std::sqrt(dt)) {}

void GaussianNoise::next(std::span<double> dW) {
  for (double& v : dW) v = scale_ * normal_(engine_);
}

void ReplayNoise::next(std::span<double> dW) {
  if (pos_ + dW.size() > data_.size()) throw DomainError("replay noise exhausted");
  for (double& v : dW) v = data_[pos_++];
}

EulerMaruyama::EulerMaruyama(const SddeModel& model)
    : model_(&model), drift_(model.dim_state), sigma_(model.dim_state * model.dim_noise) {}

namespace {
bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}
}  // namespace

void EulerMaruyama::step(SegmentView x, std::span<const double> dW, double dt,
                         std::span<const double> extra_drift, std::span<double> out) {
  const std::size_t n = model_->dim_state;
  const std::size_t m = model_->dim_noise;
  if (x.dim() != n || dW.size() != m || out.size() != n || (!extra_drift.empty() && extra_drift.size() != n)) {
    throw DomainError("em_step: dimension mismatch for model '" + model_->name + "'");
  }
  model_->drift(x, drift_);
  if (!all_finite(drift_)) {
    throw NonFiniteError("non-finite drift in model '" + model_->name + "'", Segment::from_view(x));
  }
  model_->diffusion(x, sigma_);
  if (!all_finite(sigma_)) {
    throw NonFiniteError("non-finite diffusion in model '" + model_->name + "'", Segment::from_view(x));
  }
  auto x0 = x.now();
  for (std::size_t i = 0; i < n; ++i) {
    double a = drift_[i];
    if (!extra_drift.empty()) a += extra_drift[i];
    double noise = 0.0;
    for (std::size_t j = 0; j < m; ++j) noise += sigma_[i * m + j] * dW[j];
    out[i] = x0[i] + a * dt + noise;
  }
}

std::vector<double> em_step(const SddeModel& model, SegmentView x, std::span<const double> dW, double dt,
                            std::span<const double> extra_drift) {
  EulerMaruyama em(model);
  std::vector<double> out(model.dim_state);
  em.step(x, dW, dt, extra_drift, out);
  return out;
}

PathGrid em_simulate(const SddeModel& model, const Segment& init, std::size_t steps, NoiseSource& noise,
                     const ControlFn& control) {
  model.validate();
  if (init.dim() != model.dim_state) throw DomainError("initial segment dimension does not match the model");
  PathGrid path(init, model.dim_noise, steps);
  EulerMaruyama em(model);
  std::vector<double> dW(model.dim_noise);
  std::vector<double> extra(control ? model.dim_state : 0);
  std::vector<double> next(model.dim_state);
  const double dt = init.dt();
  for (std::size_t k = 0; k < steps; ++k) {
    SegmentView seg = path.segment_view(k);
    noise.next(dW);
    if (control) {
      std::fill(extra.begin(), extra.end(), 0.0);
      control(k, seg, extra);
    }
    try {
      em.step(seg, dW, dt, extra, next);
    } catch (const NonFiniteError& e) {
      throw NonFiniteError(std::string(e.what()) + " at step " + std::to_string(k), e.segment(),
                           static_cast<std::ptrdiff_t>(k));
    }
    path.append(next, dW);
  }
  return path;
}

}  // namespace sdde
