#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sdde/error.hpp"
#include "sdde/transport.hpp"

using namespace sdde;

namespace {

std::vector<double> random_costs(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(count);
  for (auto& v : c) v = u(rng);
  return c;
}

// Uniform transport on na x nb expanded to an lcm x lcm assignment by
// replicating rows and columns, then solved by enumeration.
double expanded_brute_force(const std::vector<double>& cost, std::size_t na, std::size_t nb) {
  const std::size_t L = std::lcm(na, nb);
  std::vector<double> big(L * L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) big[i * L + j] = cost[(i / (L / na)) * nb + j / (L / nb)];
  return oracle::brute_force_assignment(big, L);
}

}  // namespace

TEST_CASE("assignment equals brute force on random 3x3 instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cost = random_costs(rng, 9);
    const auto res = solve_assignment(cost, 3);
    CHECK(std::abs(res.total_cost / 3.0 - oracle::brute_force_assignment(cost, 3)) <= 1e-12);
    double check = 0.0;
    for (std::size_t i = 0; i < 3; ++i) check += cost[i * 3 + res.column_of_row[i]];
    CHECK(check == doctest::Approx(res.total_cost).epsilon(1e-14));
  }
}

TEST_CASE("assignment equals brute force on 7x7 instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cost = random_costs(rng, 49);
    CHECK(std::abs(solve_assignment(cost, 7).total_cost / 7.0 - oracle::brute_force_assignment(cost, 7)) <= 1e-12);
  }
}

TEST_CASE("assignment with ties and zeros") {
  const std::vector<double> zeros(16, 0.0);
  CHECK(solve_assignment(zeros, 4).total_cost == 0.0);
  const std::vector<double> diag{0, 1, 1, 1, 0, 1, 1, 1, 0};
  CHECK(solve_assignment(diag, 3).total_cost == 0.0);
  CHECK(solve_assignment(std::vector<double>{0.25}, 1).total_cost == 0.25);
}

TEST_CASE("uniform transport with unequal sizes equals the expanded brute force") {
  std::mt19937_64 rng(99);
  for (auto [na, nb] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 2}, {1, 4}, {2, 4}, {3, 6}, {2, 6}}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto cost = random_costs(rng, na * nb);
      CAPTURE(na);
      CAPTURE(nb);
      CHECK(std::abs(solve_uniform_transport(cost, na, nb) - expanded_brute_force(cost, na, nb)) <= 1e-12);
    }
  }
}

TEST_CASE("uniform transport agrees with assignment on square instances") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cost = random_costs(rng, 25);
    CHECK(solve_uniform_transport(cost, 5, 5) == doctest::Approx(solve_assignment(cost, 5).total_cost / 5.0).epsilon(1e-12));
  }
}

TEST_CASE("one source spreads evenly") {
  const std::vector<double> cost{0.1, 0.2, 0.6};
  CHECK(solve_uniform_transport(cost, 1, 3) == doctest::Approx(0.3));
}
