#include <doctest.h>

#include <cmath>

#include "hawkes/error.hpp"
#include "hawkes/simulator.hpp"
#include "hawkes/stats.hpp"
#include "oracles.hpp"

using namespace hawkes;

namespace {

ModelParams affine_exp(double nu, double beta, double alpha = 1.0) {
  return {MemoryKernel::exponential(alpha), Activation::affine(nu, beta)};
}

// Lambda(t) = nu t + beta alpha A (1 - e^{-t/alpha}), A = S(0).
double affine_gap(const InterArrivalState &x, double e, double nu, double beta,
                  double alpha) {
  double amp = 1.0, off = 0.0;
  for (double g : x.gaps()) amp += std::exp(-(off += g) / alpha);
  return oracle::root(
      [&](double t) {
        return nu * t + beta * alpha * amp * -std::expm1(-t / alpha) - e;
      },
      0.0, e / nu + 1.0);
}

} // namespace

TEST_CASE("first gap of the affine model solves the closed-form compensator") {
  const auto m = affine_exp(1.0, 0.5);
  for (double e : {0.01, 0.5, 1.0, 3.0}) {
    CHECK(next_gap_inverse({}, e, m, 1e-13) ==
          doctest::Approx(affine_gap({}, e, 1.0, 0.5, 1.0)).epsilon(1e-11));
    const InterArrivalState x({0.2, 0.9, 0.4});
    CHECK(next_gap_inverse(x, e, m, 1e-13) ==
          doctest::Approx(affine_gap(x, e, 1.0, 0.5, 1.0)).epsilon(1e-11));
  }
  // Constant intensity 2: the gap is e / 2.
  CHECK(next_gap_inverse({}, 0.7, affine_exp(2.0, 0.0)) ==
        doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("cumulative intensity against fixed-grid quadrature") {
  const ModelParams m{MemoryKernel::exponential(1.0),
                      Activation::polynomial(1.0, 1.0, 0.5)};
  const InterArrivalState x({0.3, 0.6});
  const double want = oracle::simpson(
      [](double s) {
        return std::sqrt(1.0 + std::exp(-s) + std::exp(-s - 0.3) +
                         std::exp(-s - 0.9));
      },
      0.0, 2.0);
  CHECK(cumulative_intensity(x, 2.0, m, 1e-12) ==
        doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("tabulated kernel inversion against quadrature root") {
  const ModelParams m{MemoryKernel(TabulatedKernel{{0.0, 2.0}, {1.0, 0.0}}),
                      Activation::affine(0.5, 0.8)};
  const InterArrivalState x({0.5, 0.25});
  auto lam = [](double s) {
    auto h = [](double u) { return std::max(0.0, 1.0 - 0.5 * u); };
    return 0.5 + 0.8 * (h(s) + h(s + 0.5) + h(s + 0.75));
  };
  const double e = 1.3;
  const double want = oracle::root(
      [&](double t) { return oracle::simpson(lam, 0.0, t, 4000) - e; }, 0.0,
      10.0);
  CHECK(next_gap_inverse(x, e, m, 1e-12) ==
        doctest::Approx(want).epsilon(1e-9));
  CHECK(next_gap_direct(x, e, m, 1e-12) ==
        doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("stepper and explicit sums agree along a path") {
  const ModelParams m{MemoryKernel::exponential(0.7),
                      Activation::polynomial(1.0, 1.0, 0.5)};
  SimConfig sc;
  sc.seed = 3;
  sc.max_events = 200;
  const PointPath p = simulate({}, m, sc);
  REQUIRE(p.size() == 200);
  std::vector<double> chron;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto x = InterArrivalState::from_chronological(chron);
    CHECK(next_gap_direct(x, p.e_used[k], m) ==
          doctest::Approx(p.gaps[k]).epsilon(1e-9));
    chron.push_back(p.gaps[k]);
  }
  CHECK(p.times.back() == doctest::Approx(stats::mean(p.gaps) * 200));
}

TEST_CASE("kernel_step consumes one exponential") {
  const auto m = affine_exp(1.0, 0.5);
  CounterRng a(9), b(9);
  const auto x = kernel_step({}, a, m);
  CHECK(x.size() == 1);
  CHECK(x.gap(1) == doctest::Approx(next_gap_inverse({}, b.exponential(), m)));
}

TEST_CASE("simulation is reproducible and honours the horizon") {
  const auto m = affine_exp(1.0, 0.5);
  SimConfig sc;
  sc.seed = 5;
  sc.max_events = 100;
  const PointPath a = simulate({}, m, sc), b = simulate({}, m, sc);
  CHECK(a.gaps == b.gaps);
  CHECK(a.status == PathStatus::kCompleted);
  sc.horizon = 10.0;
  sc.max_events = 100000;
  const PointPath c = simulate({}, m, sc);
  CHECK(c.status == PathStatus::kHorizonReached);
  CHECK(c.times.back() <= 10.0);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(c.gaps[k] == a.gaps[k]);
}

TEST_CASE("superlinear activation is flagged as blow-up") {
  const ModelParams m{MemoryKernel::exponential(1.0),
                      Activation::polynomial(1.0, 1.0, 2.0)};
  SimConfig sc;
  sc.seed = 1;
  sc.max_events = 1000000;
  const PointPath p = simulate({}, m, sc);
  CHECK(p.status == PathStatus::kBlowUpSuspected);
  CHECK(p.gaps.back() < sc.min_gap);
  CHECK(std::string(path_status_name(p.status)) == "BlowUpSuspected");
}

TEST_CASE("compensator increments reproduce the driving exponentials") {
  const auto m = affine_exp(1.0, 0.5);
  SimConfig sc;
  sc.seed = 11;
  sc.max_events = 500;
  PointPath p = simulate({}, m, sc);
  const auto inc = compensator_increments(p, {}, m, sc.inversion_tol);
  for (std::size_t k = 0; k < inc.size(); ++k)
    CHECK(inc[k] == doctest::Approx(p.e_used[k]).epsilon(1e-8));
  p.gaps[10] *= 1.5;
  CHECK_THROWS_AS(compensator_increments(p, {}, m, sc.inversion_tol),
                  IntegrityError);
}

TEST_CASE("thinning draws have the inversion law") {
  const auto m = affine_exp(1.0, 0.5);
  const InterArrivalState x({0.4});
  CounterRng r(21);
  std::vector<double> thin(4000);
  for (auto &t : thin) t = next_gap_thinning(x, r, m);
  // CDF of the first gap: 1 - exp(-Lambda(t)).
  double amp = 1.0 + std::exp(-0.4);
  const auto ks = stats::ks_one_sample(thin, [&](double t) {
    return -std::expm1(-(t + 0.5 * amp * -std::expm1(-t)));
  });
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("random-walk lower bound along affine paths") {
  const auto m = affine_exp(1.0, 0.5);
  SimConfig sc;
  sc.seed = 2;
  sc.max_events = 2000;
  const auto rw = random_walk_bound_check(simulate({}, m, sc), m, 0.05);
  CHECK(rw.holds);
  CHECK(rw.violations == 0);
  CHECK(rw.max_excess < 0.0);
  const ModelParams sup{MemoryKernel::exponential(1.0),
                        Activation::polynomial(1.0, 1.0, 2.0)};
  CHECK_THROWS_AS(random_walk_bound_check(PointPath{}, sup, 0.05),
                  UnsupportedError);
}

TEST_CASE("invalid arguments") {
  const auto m = affine_exp(1.0, 0.5);
  CHECK_THROWS_AS(next_gap_inverse({}, -1.0, m), DomainError);
  const ModelParams dead{MemoryKernel::exponential(1.0),
                         Activation(TabulatedActivation{{0.0, 1.0}, {1e-3, 1e-3}, 0.0})};
  CHECK_THROWS_AS(next_gap_inverse({}, 1e4, dead, 1e-10, 100.0),
                  UnboundedSearchError);
}

TEST_CASE("tabulated kernel and activation keep compensator integrity") {
  const ModelParams m{
      MemoryKernel(TabulatedKernel{{0, 0.5, 1, 2, 4}, {1, 0.6, 0.35, 0.1, 0}}),
      Activation(TabulatedActivation{{0, 1, 3}, {0.5, 1.0, 1.6}, 0.25})};
  SimConfig sc;
  sc.seed = 3;
  sc.max_events = 1000;
  const PointPath p = simulate({}, m, sc);
  const auto inc = compensator_increments(p, {}, m, sc.inversion_tol);
  REQUIRE(inc.size() == 1000);
  // Piecewise-linear intensity: exact Simpson on each linear piece.
  std::vector<double> chron;
  for (std::size_t n = 0; n < 30; ++n) {
    const auto x = InterArrivalState::from_chronological(chron);
    auto rate = [&](double s) {
      return m.activation(excitation_sum(x, s, m.kernel).value);
    };
    CHECK(oracle::simpson(rate, 0.0, p.gaps[n], 400000) ==
          doctest::Approx(p.e_used[n]).epsilon(1e-9));
    chron.push_back(p.gaps[n]);
  }
}
