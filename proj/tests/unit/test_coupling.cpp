#include <cmath>
#include <vector>

#include "doctest.h"
#include "sdde/catalog.hpp"
#include "sdde/coupling.hpp"
#include "sdde/seed.hpp"
#include "sdde/stats.hpp"
#include "test_models.hpp"

using namespace sdde;

namespace {
const TimeGrid kGrid = TimeGrid::from_times(0.01, 1.0, 2.0);
}

TEST_CASE("d_metric values") {
  const auto g = TimeGrid::from_times(0.1, 1.0, 1.0);
  const auto zero = Segment::constant(g, 0.0);
  CHECK(d_metric(zero, zero, {2.0, 0.5}) == 0.0);
  CHECK(d_metric(Segment::constant(g, 0.09), zero, {2.0, 0.5}) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(d_metric(Segment::constant(g, 0.5), zero, {10.0, 1.0}) == 1.0);
  CHECK_THROWS_AS(d_metric(zero, zero, {0.0, 0.5}), DomainError);
  CHECK_THROWS_AS(d_metric(zero, zero, {1.0, 1.5}), DomainError);
}

TEST_CASE("synchronous coupling of equal starts is bit-exact") {
  const auto model = make_model("tanh-smooth");
  const auto x = Segment::constant(kGrid, 0.4);
  GaussianNoise noise(4, kGrid.dt);
  const auto run = run_synchronous(model, x, x, kGrid.horizon_steps, noise);
  CHECK(std::equal(run.path_x.states().begin(), run.path_x.states().end(), run.path_y.states().begin()));
  CHECK(!run.stopped());
  CHECK(run.ledger.kl_half_integral == 0.0);
}

TEST_CASE("synchronous coupling contracts or expands with the drift") {
  const auto stable = testing_models::scalar("stable", [](double x0, double) { return -2.0 * x0; }, 1.0, 2.0);
  const auto expanding = testing_models::scalar("expanding", [](double x0, double) { return x0; }, 1.0, 1.0);
  const auto x = Segment::constant(kGrid, 1.0);
  const auto y = Segment::constant(kGrid, 0.0);
  GaussianNoise n1(8, kGrid.dt), n2(8, kGrid.dt);
  const auto s = run_synchronous(stable, x, y, kGrid.horizon_steps, n1);
  const auto e = run_synchronous(expanding, x, y, kGrid.horizon_steps, n2);
  double prev_s = 1.0, prev_e = 1.0;
  for (std::size_t k = 10; k <= kGrid.horizon_steps; k += 10) {
    const double ds = std::abs(s.path_x.state_at_step(k)[0] - s.path_y.state_at_step(k)[0]);
    const double de = std::abs(e.path_x.state_at_step(k)[0] - e.path_y.state_at_step(k)[0]);
    CHECK(ds < prev_s);
    CHECK(de > prev_e);
    prev_s = ds;
    prev_e = de;
  }
  // additive noise cancels in the difference: it follows (1 - 2 dt)^k exactly
  CHECK(prev_s == doctest::Approx(std::pow(0.98, 200)).epsilon(1e-10));
}

TEST_CASE("controlled coupling with x == y falls back") {
  const auto model = make_model("linear-delay");
  const auto x = Segment::constant(kGrid, 0.3);
  GaussianNoise noise(1, kGrid.dt);
  const auto run = run_controlled(model, x, x, {}, kGrid.horizon_steps, noise);
  CHECK(run.max_control_norm() == 0.0);
  CHECK(run.ledger.kl_half_integral == 0.0);
  CHECK(!run.warnings.empty());
}

TEST_CASE("control magnitude stays within threshold_mult * upsilon^gamma") {
  const auto model = make_model("holder-drift");
  const auto x = Segment::constant(kGrid, 0.01);
  const auto y = Segment::constant(kGrid, 0.0);
  const ControlSpec spec{0.5, 2.0, LedgerMode::with_ledger};
  const auto runs = run_controlled_batch(model, x, y, spec, kGrid.horizon_steps, {200, 3, 1});
  for (const auto& run : runs) {
    CHECK(run.upsilon == doctest::Approx(0.01));
    CHECK(run.gain == doctest::Approx(10.0));
    CHECK(run.max_control_norm() <= 2.0 * 0.1 + 1e-15);
    // ledger: kl = 1/2 sum |sigma^{-1} chi|^2 dt with sigma = 1
    double kl = 0.0;
    for (std::size_t k = 0; k < run.steps(); ++k) kl += 0.5 * run.control(k)[0] * run.control(k)[0] * kGrid.dt;
    CHECK(run.ledger.kl_half_integral == doctest::Approx(kl).epsilon(1e-12));
    CHECK(run.ledger.t_elapsed == doctest::Approx(kGrid.horizon()));
  }
}

TEST_CASE("contraction estimate on the linear model") {
  const auto model = make_model("linear-delay");
  const auto x = Segment::constant(kGrid, 0.01);
  const auto y = Segment::constant(kGrid, 0.0);
  const ControlSpec spec{0.5, 2.0, LedgerMode::with_ledger};
  const auto runs = run_controlled_batch(model, x, y, spec, kGrid.horizon_steps, {1000, 5, 1});
  const auto est = contraction_estimate(runs, 2.0, 0.5);
  CHECK(est.exceed_prob <= 0.05);
  CHECK(est.mean_ratio < 0.5);
  CHECK(!est.degenerate);
  CHECK(est.tv_bound == doctest::Approx(std::sqrt(est.mean_kl / 2)));
}

TEST_CASE("contraction estimate edge cases") {
  const auto model = make_model("linear-delay");
  const auto x = Segment::constant(kGrid, 0.2);
  const auto same = run_synchronous_batch(model, x, x, kGrid.horizon_steps, {20, 1, 1});
  const auto est = contraction_estimate(same, 1.0, 0.5);
  CHECK(est.degenerate);
  CHECK(est.mean_ratio == 0.0);
  CHECK(est.exceed_prob == 0.0);
  CHECK_THROWS_AS(contraction_estimate(same, 1.005, 0.5), DomainError);
}

TEST_CASE("importance weights average to one") {
  const auto model = make_model("tanh-smooth");
  const auto x = Segment::constant(kGrid, 0.5);
  const auto y = Segment::constant(kGrid, 0.0);
  const auto runs = run_controlled_batch(model, x, y, {0.5, 2.0, LedgerMode::with_ledger}, 100, {4000, 17, 1});
  std::vector<double> w;
  for (const auto& r : runs) w.push_back(importance_weight(r.ledger));
  const auto est = mean_estimate(w);
  CHECK(std::abs(est.mean - 1.0) <= 4 * est.std_error);
}

TEST_CASE("batches do not depend on the worker count") {
  const auto model = make_model("holder-drift");
  const auto x = Segment::constant(kGrid, 0.05);
  const auto y = Segment::constant(kGrid, -0.05);
  const ControlSpec spec{0.4, 2.0, LedgerMode::with_ledger};
  const auto a = run_controlled_batch(model, x, y, spec, 100, {16, 9, 1});
  const auto b = run_controlled_batch(model, x, y, spec, 100, {16, 9, 4});
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::equal(a[i].path_y.states().begin(), a[i].path_y.states().end(), b[i].path_y.states().begin()));
    CHECK(a[i].ledger.log_exponent == b[i].ledger.log_exponent);
  }
}

TEST_CASE("n0 bound") {
  const auto b = n0_bound(0.5, 0.75, 1.0, 1.0, 1.0, 0.1);
  CHECK(b.n1 == doctest::Approx(10.0));
  CHECK(b.n2 == doctest::Approx(8.0));
  CHECK(b.n0 == doctest::Approx(10.0));
  CHECK(n0_bound(0.5, 0.75, 1.0, 0.0, 0.0, 0.1).n0 == doctest::Approx(10.0));
  CHECK(n0_bound(0.5, 0.5 + 1e-9, 1.0, 1.0, 1.0, 0.1).n2 > 1e8);
  CHECK_THROWS_AS(n0_bound(0.5, 0.5, 1.0, 1.0, 1.0, 0.1), DomainError);
}
