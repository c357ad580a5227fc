#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdde {

struct AssignmentResult {
  std::vector<std::size_t> column_of_row;
  double total_cost = 0.0;
};

/// Exact minimum-cost perfect matching of an n x n row-major cost matrix
/// (shortest augmenting paths with potentials, O(n^3)).
AssignmentResult solve_assignment(std::span<const double> cost, std::size_t n);

/// Exact optimal transport between uniform measures on na and nb points with an
/// na x nb row-major non-negative cost. Returns the minimal expected cost.
/// Integer-scaled supplies (nb per row, na per column) with successive shortest paths.
double solve_uniform_transport(std::span<const double> cost, std::size_t na, std::size_t nb);

}  // namespace sdde
