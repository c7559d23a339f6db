#include <doctest.h>

#include <cmath>

#include "hawkes/error.hpp"
#include "hawkes/expmem.hpp"
#include "hawkes/simulator.hpp"
#include "oracles.hpp"

using namespace hawkes;
using namespace hawkes::expmem;

TEST_CASE("Z of a state") {
  CHECK(z_from_state({}, 1.0) == 1.0);
  const InterArrivalState x({1.0, 2.0});
  CHECK(z_from_state(x, 2.0) ==
        doctest::Approx(1.0 + std::exp(-0.5) + std::exp(-1.5)));
}

TEST_CASE("forward integral against direct quadrature in time") {
  const double alpha = 0.8, z = 2.5, t = 1.7;
  const std::vector<Activation> acts = {
      Activation::affine(1.0, 0.5), Activation::polynomial(1.0, 1.0, 0.5),
      Activation::polynomial(0.5, 2.0, 2.0), Activation::polynomial(1.0, 1.0, 3.0),
      Activation(TabulatedActivation{{0.0, 1.0, 2.0}, {1.0, 1.2, 2.0}, 0.3})};
  for (const auto &act : acts) {
    const double want = oracle::simpson(
        [&](double s) { return act(z * std::exp(-s / alpha)); }, 0.0, t);
    CHECK(forward_integral(z, t, act, alpha) ==
          doctest::Approx(want).epsilon(1e-10));
  }
  // Long horizons cross into the small-argument regime.
  const auto p = Activation::polynomial(1.0, 1.0, 0.5);
  const double want = oracle::simpson(
      [&](double s) { return p(z * std::exp(-s / alpha)); }, 0.0, 30.0, 200000);
  CHECK(forward_integral(z, 30.0, p, alpha) ==
        doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("g_phi inverts the forward integral") {
  const auto act = Activation::polynomial(1.0, 1.0, 0.5);
  for (double y : {1e-4, 0.3, 2.0, 10.0}) {
    const double t = g_phi(3.0, y, act, 1.0, 1e-12);
    CHECK(forward_integral(3.0, t, act, 1.0) ==
          doctest::Approx(y).epsilon(1e-10));
  }
}

TEST_CASE("Z-chain recursion and the generic simulator") {
  const auto act = Activation::affine(1.0, 0.5);
  const ModelParams m{MemoryKernel::exponential(1.0), act};
  CounterRng rng(4);
  const auto zp = simulate_z(1.0, 300, act, 1.0, rng);
  REQUIRE(zp.z.size() == 301);
  for (std::size_t n = 0; n < 300; ++n)
    CHECK(zp.z[n + 1] ==
          doctest::Approx(1.0 + std::exp(-zp.gaps[n]) * zp.z[n]).epsilon(1e-14));
  SimConfig sc;
  sc.seed = 4;
  sc.max_events = 300;
  const PointPath p = simulate({}, m, sc);
  for (std::size_t n = 0; n < 300; ++n)
    CHECK(p.gaps[n] == doctest::Approx(zp.gaps[n]).epsilon(1e-10));
  const auto palm = palm_gaps_from_z(
      std::vector<double>(zp.z.begin(), zp.z.end() - 1), zp.e, act, 1.0);
  for (std::size_t n = 0; n < 300; ++n)
    CHECK(palm[n] == doctest::Approx(zp.gaps[n]).epsilon(1e-10));
}

TEST_CASE("Lyapunov drift") {
  // Affine: integral_{z-1}^{z} (nu + beta u)/u du = nu log(z/(z-1)) + beta.
  const auto act = Activation::affine(1.0, 0.5);
  for (double z : {1.5, 3.0, 50.0})
    CHECK(lyapunov_drift(z, act, 1.0) ==
          doctest::Approx(std::log(z / (z - 1.0)) + 0.5 - 1.0));
  const auto p = Activation::polynomial(1.0, 1.0, 0.5);
  const double z = 4.0;
  const double want =
      oracle::simpson([&](double u) { return p(u) / u; }, z - 1.0, z) - 1.0;
  CHECK(lyapunov_drift(z, p, 1.0) == doctest::Approx(want).epsilon(1e-10));
  CHECK(lyapunov_f(2.0, p) == doctest::Approx(0.0));
  // Negative drift at large z when alpha * beta_e < 1.
  CHECK(lyapunov_drift(1e4, act, 1.0) < 0.0);
}

TEST_CASE("stationary run requires alpha beta_e < 1") {
  CounterRng rng(1);
  CHECK_THROWS_AS(
      stationary_z(Activation::affine(1.0, 1.5), 1.0, 10, 10, rng),
      UnsupportedError);
  const auto zp =
      stationary_z(Activation::affine(1.0, 0.5), 1.0, 100, 50, rng);
  CHECK(zp.gaps.size() == 50);
}

TEST_CASE("transient experiment summaries") {
  CounterRng rng(2);
  const auto rep = transient_experiment(2.0, 1.0, 1.0, 1.0, 2000, rng, 1e-10, 50);
  CHECK(rep.z.size() == 2001);
  CHECK(rep.rescaled_gaps.size() == rep.rescaled_index.size());
  CHECK(rep.rescaled_index.front() >= 1500);
  CHECK(rep.final_ratio == doctest::Approx(rep.z.back() / 2000.0));
  CHECK(rep.windows == 50);
  CHECK_THROWS_AS(transient_experiment(1.5, 1.0, 1.0, 1.0, 2000, rng),
                  DomainError);
}
