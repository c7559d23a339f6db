#include <doctest.h>

#include <cmath>

#include "hawkes/error.hpp"
#include "hawkes/history.hpp"

using namespace hawkes;

TEST_CASE("state storage and accessors") {
  const InterArrivalState x({0.5, 1.0, 2.0});
  CHECK(x.size() == 3);
  CHECK(x.gap(1) == 0.5);
  CHECK(x.gap(3) == 2.0);
  CHECK(x.gap(4) == INFINITY);
  CHECK(x.chronological() == std::vector<double>{2.0, 1.0, 0.5});
  CHECK(x.gaps() == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(InterArrivalState::from_chronological({2.0, 1.0, 0.5}) == x);
  CHECK(InterArrivalState().is_empty());
  CHECK_FALSE(InterArrivalState({}, false).is_empty());
  CHECK(prepend_gap(x, 0.1).gaps() == std::vector<double>{0.1, 0.5, 1.0, 2.0});
  CHECK_THROWS_AS(InterArrivalState({-1.0}), DomainError);
}

TEST_CASE("excitation sum against explicit kernel sums") {
  const auto k = MemoryKernel::exponential(1.5);
  const InterArrivalState x({0.5, 1.0, 2.0});
  for (double t : {0.0, 0.3, 4.0}) {
    const double want = std::exp(-t / 1.5) + std::exp(-(t + 0.5) / 1.5) +
                        std::exp(-(t + 1.5) / 1.5) + std::exp(-(t + 3.5) / 1.5);
    const auto s = excitation_sum(x, t, k);
    CHECK(s.value == doctest::Approx(want).epsilon(1e-15));
    CHECK(s.truncation_bound == 0.0);
  }
  // Dropped terms stay within the requested bound.
  std::vector<double> many(2000, 0.01);
  const InterArrivalState y(many);
  const double full = excitation_sum(y, 0.0, k).value;
  const auto cut = excitation_sum(y, 0.0, k, 1e-12);
  CHECK(std::abs(full - cut.value) <= 1e-12);
}

TEST_CASE("truncated prefixes and finite support") {
  const auto tri = MemoryKernel(TabulatedKernel{{0.0, 2.0}, {1.0, 0.0}});
  const InterArrivalState open({0.5}, false);
  CHECK(excitation_sum(open, 0.0, tri).truncation_bound == INFINITY);
  // Beyond the support nothing unseen can contribute.
  const InterArrivalState far({3.0}, false);
  const auto s = excitation_sum(far, 0.0, tri);
  CHECK(s.value == 1.0);
  CHECK(s.truncation_bound == 0.0);
}

TEST_CASE("divergence cap") {
  std::vector<double> tiny(1000, 1e-9);
  CHECK_THROWS_AS(excitation_sum(InterArrivalState(tiny), 0.0,
                                 MemoryKernel::exponential(1.0), 0.0, 100.0),
                  DivergenceError);
}

TEST_CASE("sequence metric") {
  const InterArrivalState x({1.0, 2.0}), y({1.5, 2.0, 3.0});
  // 2^-1 * 0.5 + 0 + 2^-3 * min(inf, 1).
  CHECK(seq_distance(x, y, 10) == doctest::Approx(0.25 + 0.125));
  CHECK(seq_distance(x, x, 10) == 0.0);
}

TEST_CASE("point measure round trip") {
  const InterArrivalState x({0.3, 0.7, 1.1});
  const auto m = to_point_measure(x);
  REQUIRE(m.points.size() == 4);
  CHECK(m.points[0] == 0.0);
  CHECK(m.points[3] == doctest::Approx(-2.1));
  const auto back = from_point_measure(m);
  REQUIRE(back.size() == 3);
  for (std::size_t k = 1; k <= 3; ++k)
    CHECK(back.gap(k) == doctest::Approx(x.gap(k)).epsilon(1e-15));
}
