#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sdde/grid.hpp"
#include "sdde/model.hpp"

namespace sdde {

/// Empirical counts of violations of the declared regularity at (alpha, beta, C).
/// Advisory: a zero count is evidence, not proof.
struct AssumptionReport {
  std::size_t pairs_checked = 0;   // pairs with |x - y| <= 1
  std::size_t points_checked = 0;  // distinct segments probed
  std::size_t one_sided_holder_violations = 0;  // drift, (a(x)-a(y), x(0)-y(0)) <= C|x-y|^{alpha+1}
  std::size_t diffusion_holder_violations = 0;  // |sigma(x)-sigma(y)|_F <= C|x-y|^beta
  std::size_t nondegeneracy_violations = 0;     // sigma sigma^{-1} = I and |sigma^{-1}|_F bound
  std::size_t growth_violations = 0;            // (a(x), x(0)) <= C(1 + |x|^2)
  double worst_one_sided_ratio = 0.0;
  double worst_diffusion_ratio = 0.0;

  std::size_t total() const {
    return one_sided_holder_violations + diffusion_holder_violations + nondegeneracy_violations +
           growth_violations;
  }
};

using SegmentPair = std::pair<Segment, Segment>;

AssumptionReport verify_assumptions(const SddeModel& model, const std::vector<SegmentPair>& probes);

/// Deterministic probe cloud for scalar-or-vector models: random piecewise-smooth
/// segments paired with perturbations at scales from 1e-6 to 1, plus pairs
/// straddling the origin.
std::vector<SegmentPair> standard_probe_pairs(const TimeGrid& grid, std::size_t dim,
                                              std::size_t count = 400, std::uint64_t seed = 7);

}  // namespace sdde
