#include <cmath>

#include "doctest.h"
#include "sdde/error.hpp"
#include "sdde/grid.hpp"
#include "sdde/path.hpp"

using namespace sdde;

TEST_CASE("exact_steps accepts grid multiples and rejects the rest") {
  CHECK(exact_steps(0.3, 0.01, "t") == 30);
  CHECK(exact_steps(0.0, 0.01, "t") == 0);
  CHECK_THROWS_AS(exact_steps(0.305, 0.01, "t"), DomainError);
  CHECK_THROWS_AS(exact_steps(-1.0, 0.01, "t"), DomainError);
  CHECK_THROWS_AS(TimeGrid::from_times(0.01, 1.005, 2.0), DomainError);
  const auto g = TimeGrid::from_times(0.1, 1.0, 3.0);
  CHECK(g.delay_steps == 10);
  CHECK(g.horizon_steps == 30);
  CHECK(g.segment_points() == 11);
}

TEST_CASE("segment accessors") {
  const auto g = TimeGrid::from_times(0.1, 1.0, 1.0);
  const auto s = Segment::sampled(g, 1, [](double t, std::span<double> out) { out[0] = t; });
  CHECK(s.size() == 11);
  CHECK(s.view().delayed()[0] == doctest::Approx(-1.0));
  CHECK(s.view().now()[0] == doctest::Approx(0.0));
  CHECK(s.view().lagged(3)[0] == doctest::Approx(-0.3));
}

TEST_CASE("sup_dist") {
  const auto g = TimeGrid::from_times(0.1, 1.0, 1.0);
  const auto one = Segment::constant(g, 1.0);
  const auto zero = Segment::constant(g, 0.0);
  CHECK(sup_dist(one, zero) == 1.0);
  CHECK(sup_dist(one, one) == 0.0);
  const auto sine = Segment::sampled(g, 1, [](double t, std::span<double> out) { out[0] = std::sin(t); });
  double expected = 0.0;
  for (int i = 0; i <= 10; ++i) expected = std::max(expected, std::abs(std::sin(-1.0 + 0.1 * i)));
  CHECK(sup_dist(sine, zero) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(sup_dist(sine, zero) == doctest::Approx(0.84147).epsilon(1e-5));

  const auto other = Segment::constant(TimeGrid::from_times(0.05, 1.0, 1.0), 0.0);
  CHECK_THROWS_AS(sup_dist(one, other), GridMismatch);
}

TEST_CASE("segment arithmetic") {
  const auto g = TimeGrid::from_times(0.5, 1.0, 1.0);
  auto a = Segment::constant(g, 1.0);
  const auto b = Segment::constant(g, 2.0);
  const auto c = a + 2.0 * b;
  CHECK(c.now()[0] == 5.0);
  a *= 3.0;
  CHECK(a == Segment::constant(g, 3.0));
}

TEST_CASE("path segments") {
  const auto g = TimeGrid::from_times(0.5, 1.0, 1.0);
  PathGrid path(Segment::constant(g, 1.0), 1);
  CHECK(path.segment_at(0) == Segment::constant(g, 1.0));
  const double x1 = 2.0, dw = 0.1;
  path.append({&x1, 1}, {&dw, 1});
  CHECK(path.steps() == 1);
  const auto s = path.segment_at(1);
  CHECK(s.point(0)[0] == 1.0);
  CHECK(s.now()[0] == 2.0);
  CHECK(path.increment(0)[0] == 0.1);
  CHECK_THROWS_AS(path.segment_at(2), DomainError);
}
