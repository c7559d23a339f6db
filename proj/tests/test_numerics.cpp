#include <doctest.h>

#include <cmath>

#include "hawkes/error.hpp"
#include "hawkes/numerics.hpp"
#include "hawkes/rng.hpp"

using namespace hawkes;
using namespace hawkes::numerics;

TEST_CASE("Gauss-Kronrod matches closed-form integrals") {
  CHECK(integrate_gk([](double x) { return std::exp(x); }, 0, 1, 1e-13).value ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  CHECK(integrate_gk([](double x) { return 1.0 / std::sqrt(x); }, 0, 4, 1e-9)
            .value == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(integrate_gk([](double) { return 1.0; }, 2, 2, 1e-9).value == 0.0);
}

TEST_CASE("adaptive Simpson matches closed-form integrals") {
  const auto q = integrate_simpson([](double x) { return std::sin(x); }, 0,
                                   M_PI, 1e-12);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(q.evaluations > 5);
}

TEST_CASE("compensated sum recovers small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("concave cumulative inversion") {
  // rate 1 + e^{-t}: F(t) = t + 1 - e^{-t}.
  auto rate = [](double t) { return 1.0 + std::exp(-t); };
  auto inc = [](double a, double b) {
    return (b - a) + std::exp(-a) - std::exp(-b);
  };
  for (double target : {1e-6, 0.3, 1.0, 5.0, 40.0}) {
    const auto r = invert_concave_cumulative(rate, inc, target, 1e-13, 1e6);
    CHECK(r.t + 1.0 - std::exp(-r.t) == doctest::Approx(target).epsilon(1e-12));
  }
  CHECK(invert_concave_cumulative(rate, inc, 0.0, 1e-12, 1e6).t == 0.0);
  // rate e^{-t} never accumulates past 1.
  auto decay = [](double t) { return std::exp(-t); };
  auto dinc = [](double a, double b) { return std::exp(-a) - std::exp(-b); };
  CHECK_THROWS_AS(invert_concave_cumulative(decay, dinc, 2.0, 1e-12, 100.0),
                  UnboundedSearchError);
  auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(invert_concave_cumulative(zero, dinc, 1.0, 1e-12, 100.0),
                  DomainError);
}

TEST_CASE("bisection") {
  const double r =
      bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14, 0.0);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("counter RNG is a pure function of seed, stream and index") {
  CounterRng a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CounterRng u(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    sum += u.exponential();
  }
  CHECK(sum / 100000 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(CounterRng(5, 1).split(2).next_u64() ==
        CounterRng(5, 1).split(2).next_u64());
}
