#include "sdde/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdde/error.hpp"

namespace sdde {

AssignmentResult solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw DomainError("assignment: cost matrix must be n x n");
  AssignmentResult res;
  if (n == 0) return res;
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; row_of_col[0] is the virtual root of each augmentation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  res.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) res.column_of_row[row_of_col[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) res.total_cost += cost[i * n + res.column_of_row[i]];
  return res;
}

double solve_uniform_transport(std::span<const double> cost, std::size_t na, std::size_t nb) {
  if (na == 0 || nb == 0) throw DomainError("transport: both marginals need support");
  if (cost.size() != na * nb) throw DomainError("transport: cost matrix must be na x nb");
  for (double c : cost) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("transport: costs must be finite and non-negative");
  }
  const double inf = std::numeric_limits<double>::infinity();
  // Node layout: rows 0..na-1, columns na..na+nb-1.
  const std::size_t V = na + nb;
  std::vector<long long> supply(na, static_cast<long long>(nb));
  std::vector<long long> demand(nb, static_cast<long long>(na));
  std::vector<long long> flow(na * nb, 0);
  std::vector<double> potential(V, 0.0), dist(V);
  std::vector<std::ptrdiff_t> parent(V);
  std::vector<char> done(V);
  long long remaining = static_cast<long long>(na) * static_cast<long long>(nb);

  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < na; ++i) {
      if (supply[i] > 0) dist[i] = 0.0;
    }
    // Dense Dijkstra on reduced costs.
    for (;;) {
      std::size_t best = V;
      double bd = inf;
      for (std::size_t v = 0; v < V; ++v) {
        if (!done[v] && dist[v] < bd) {
          bd = dist[v];
          best = v;
        }
      }
      if (best == V) break;
      done[best] = 1;
      if (best < na) {
        const std::size_t i = best;
        for (std::size_t j = 0; j < nb; ++j) {
          const std::size_t w = na + j;
          if (done[w]) continue;
          const double rc = std::max(0.0, cost[i * nb + j] + potential[i] - potential[w]);
          if (bd + rc < dist[w]) {
            dist[w] = bd + rc;
            parent[w] = static_cast<std::ptrdiff_t>(i);
          }
        }
      } else {
        const std::size_t j = best - na;
        for (std::size_t i = 0; i < na; ++i) {
          if (done[i] || flow[i * nb + j] == 0) continue;
          const double rc = std::max(0.0, -cost[i * nb + j] + potential[best] - potential[i]);
          if (bd + rc < dist[i]) {
            dist[i] = bd + rc;
            parent[i] = static_cast<std::ptrdiff_t>(best);
          }
        }
      }
    }
    std::size_t sink = V;
    double sd = inf;
    for (std::size_t j = 0; j < nb; ++j) {
      if (demand[j] > 0 && dist[na + j] < sd) {
        sd = dist[na + j];
        sink = na + j;
      }
    }
    if (sink == V) throw Error("transport: no augmenting path (internal error)");
    // Bottleneck along the path.
    long long push = demand[sink - na];
    std::size_t v = sink;
    while (parent[v] >= 0) {
      const auto p = static_cast<std::size_t>(parent[v]);
      if (v < na) push = std::min(push, flow[v * nb + (p - na)]);  // backward edge column p -> row v
      v = p;
    }
    push = std::min(push, supply[v]);
    v = sink;
    while (parent[v] >= 0) {
      const auto p = static_cast<std::size_t>(parent[v]);
      if (v >= na) {
        flow[p * nb + (v - na)] += push;
      } else {
        flow[v * nb + (p - na)] -= push;
      }
      v = p;
    }
    supply[v] -= push;
    demand[sink - na] -= push;
    remaining -= push;
    for (std::size_t w = 0; w < V; ++w) potential[w] += std::min(dist[w], sd);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (flow[i * nb + j] > 0) total += static_cast<double>(flow[i * nb + j]) * cost[i * nb + j];
    }
  }
  return total / (static_cast<double>(na) * static_cast<double>(nb));
}

}  // namespace sdde
