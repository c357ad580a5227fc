#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdde/coupling.hpp"
#include "sdde/error.hpp"
#include "sdde/grid.hpp"
#include "sdde/model.hpp"
#include "sdde/path.hpp"

namespace sdde {

/// Largest sample size handled by the exact transport solvers.
inline constexpr std::size_t kMaxTransportSample = 512;

/// Segments of the skeleton chain at times h, 2h, ... up to the end of the path.
std::vector<Segment> skeleton(const PathGrid& path, double h);

/// Exact coupling distance between the uniform empirical measures of two samples
/// under the cost d_{N,gamma}. Equal sizes go through the assignment solver,
/// unequal sizes through the transport solver.
double empirical_coupling_distance(std::span<const Segment> sample_a, std::span<const Segment> sample_b,
                                   const MetricSpec& spec);

using TestFunctional = std::function<double(SegmentView)>;

/// A test functional failed the 1-Lipschitz check against d_{N,gamma}.
class LipschitzViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// |mean_a f - mean_b f| for a functional declared 1-Lipschitz w.r.t. d_{N,gamma};
/// a lower bound on the coupling distance. The Lipschitz property is checked on
/// every pair of the pooled sample.
double kr_dual_value(const TestFunctional& f, std::span<const Segment> sample_a, std::span<const Segment> sample_b,
                     const MetricSpec& spec);

/// Long-run proxy for the invariant measure: one trajectory from x0, samples
/// at burn_in, burn_in + h, ..., n_samples of them.
std::vector<Segment> stationary_estimate(const SddeModel& model, const Segment& x0, double burn_in, double h,
                                         std::size_t n_samples, std::uint64_t seed);

/// Segments X_t from n_paths independent paths started at x0 (path i uses
/// derive_seed(seed, i, base_noise)).
std::vector<Segment> sample_segments_at(const SddeModel& model, const Segment& x0, double t, std::size_t n_paths,
                                        std::uint64_t seed, std::size_t workers = 1);

}  // namespace sdde
