#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sdde/error.hpp"
#include "sdde/girsanov.hpp"

using namespace sdde;

namespace {

GirsanovLedger constant_eta(double eta, double T, double dt) {
  GirsanovLedger ledger;
  const double dw = 0.0;
  const auto n = static_cast<std::size_t>(std::llround(T / dt));
  for (std::size_t k = 0; k < n; ++k) ledger.accumulate({&eta, 1}, {&dw, 1}, dt);
  return ledger;
}

}  // namespace

TEST_CASE("kl of constant controls") {
  CHECK(constant_eta(0.0, 3.0, 0.01).kl_half_integral == 0.0);
  CHECK(constant_eta(0.0, 3.0, 0.01).log_exponent == 0.0);
  CHECK(std::abs(constant_eta(1.0, 2.0, 0.01).kl_half_integral - 1.0) <= 1e-12);

  GirsanovLedger ledger;
  const double dw = 0.0, two = 2.0, zero = 0.0;
  for (int k = 0; k < 50; ++k) ledger.accumulate({&two, 1}, {&dw, 1}, 0.01);
  for (int k = 0; k < 50; ++k) ledger.accumulate({&zero, 1}, {&dw, 1}, 0.01);
  CHECK(std::abs(ledger.kl_half_integral - 1.0) <= 1e-12);
  CHECK(ledger.t_elapsed == doctest::Approx(1.0));
}

TEST_CASE("hand-computed exponent on four steps") {
  const double eta[4] = {0.5, -1.0, 2.0, 0.0};
  const double dw[4] = {0.1, 0.2, -0.3, 0.4};
  const double dt = 0.25;
  GirsanovLedger ledger;
  for (int k = 0; k < 4; ++k) ledger = accumulate(ledger, {&eta[k], 1}, {&dw[k], 1}, dt);
  const double linear = 0.5 * 0.1 - 1.0 * 0.2 + 2.0 * -0.3;
  const double quad = 0.5 * (0.25 + 1.0 + 4.0) * dt;
  CHECK(ledger.log_exponent == doctest::Approx(linear - quad).epsilon(1e-14));
  CHECK(importance_weight(ledger) == doctest::Approx(std::exp(linear - quad)).epsilon(1e-14));
  CHECK(ledger.kl_half_integral == doctest::Approx(quad).epsilon(1e-14));

  GirsanovLedger flipped;
  for (int k = 0; k < 4; ++k) flipped.accumulate_signed({&eta[k], 1}, {&dw[k], 1}, dt, -1.0);
  CHECK(flipped.log_exponent == doctest::Approx(-linear - quad).epsilon(1e-14));
}

TEST_CASE("zero ledger has unit weight") { CHECK(importance_weight(GirsanovLedger{}) == 1.0); }

TEST_CASE("Pinsker bound") {
  CHECK(pinsker_tv_bound(0.0) == 0.0);
  CHECK(pinsker_tv_bound(1.0) == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(oracle::gaussian_shift_tv(1.0, 2.0) == doctest::Approx(0.5205).epsilon(1e-4));
  for (double b : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    for (double T : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double kl = constant_eta(b, T, 0.01).kl_half_integral;
      CHECK(kl == doctest::Approx(0.5 * b * b * T).epsilon(1e-12));
      CHECK(pinsker_tv_bound(kl) >= oracle::gaussian_shift_tv(b, T));
    }
  }
}

TEST_CASE("diff lower bound") {
  CHECK(diff_lower_bound(1.0, 0.0, 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  const double N = 16.0 * std::exp(4.0);
  const double expected = 0.5 / N - (1.0 + std::log(2.0)) / (N * std::log(N));
  CHECK(diff_lower_bound(0.5, 1.0, N) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(diff_lower_bound(0.5, 1.0, N) == doctest::Approx(2.86e-4).epsilon(1e-2));
  CHECK(diff_lower_bound(0.1, 5.0, 2.0) < 0.0);
  CHECK(log_diff_lower_bound(0.5, 1.0, std::log(N)) == doctest::Approx(std::log(expected)).epsilon(1e-12));
  CHECK(std::isinf(log_diff_lower_bound(0.1, 5.0, std::log(2.0))));
  CHECK_THROWS_AS(diff_lower_bound(0.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(diff_lower_bound(1.5, 1.0, 3.0), DomainError);
  CHECK_THROWS_AS(diff_lower_bound(0.5, -1.0, 3.0), DomainError);
}
