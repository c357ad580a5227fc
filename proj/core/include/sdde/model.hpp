#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "sdde/grid.hpp"

namespace sdde {

/// Writes a value computed from one segment, e.g. a(x) (n entries) or
/// sigma(x) (n*m entries, row-major).
using SegmentField = std::function<void(SegmentView x, std::span<double> out)>;

/// Directional derivative <grad F(x), u> written into `out`.
using DirectionalField = std::function<void(SegmentView x, SegmentView u, std::span<double> out)>;

/// Declared regularity constants. alpha is the one-sided Hoelder index of the
/// drift, beta the Hoelder index of the diffusion, `constant` the shared C.
struct HolderMetadata {
  double alpha = 1.0;
  double beta = 1.0;
  double constant = 1.0;
  /// Declared bound on sup_x |sigma(x)^{-1}|_F, when the right inverse exists.
  std::optional<double> inverse_bound;
};

/// dX(t) = a(X_t) dt + sigma(X_t) dW(t) with X_t the segment ending at t.
///
/// Callbacks must be re-entrant: batches evaluate them concurrently.
struct SddeModel {
  std::string name;
  std::size_t dim_state = 1;
  std::size_t dim_noise = 1;

  SegmentField drift;
  SegmentField diffusion;
  /// m x n, row-major; optional.
  SegmentField diffusion_right_inverse;
  /// <grad a(x), u> in R^n; optional.
  DirectionalField drift_gradient;
  /// <grad sigma(x), u> in R^{n x m}, row-major; optional.
  DirectionalField diffusion_gradient;

  HolderMetadata holder;

  bool has_inverse() const { return static_cast<bool>(diffusion_right_inverse); }
  bool has_gradients() const { return drift_gradient && diffusion_gradient; }

  /// Checks dimensions, presence of drift/diffusion and alpha > 0, beta > 1/2.
  void validate() const;
};

}  // namespace sdde
