#include <doctest.h>

#include <cmath>

#include "hawkes/error.hpp"
#include "hawkes/model.hpp"
#include "oracles.hpp"

using namespace hawkes;

TEST_CASE("exponential kernel tails") {
  const auto k = MemoryKernel::exponential(2.0);
  CHECK(k.alpha() == 2.0);
  CHECK(k.eval(0.0) == 1.0);
  CHECK(k.eval(2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(k.eval(INFINITY) == 0.0);
  // H(x) = a e^{-x/a}, integral of H beyond x = a^2 e^{-x/a}.
  CHECK(k.tail_mass(1.0) == doctest::Approx(2.0 * std::exp(-0.5)));
  CHECK(k.tail_moment(1.0) == doctest::Approx(4.0 * std::exp(-0.5)));
  CHECK(k.support_end() == INFINITY);
  CHECK_THROWS_AS(MemoryKernel::exponential(0.0), DomainError);
}

TEST_CASE("tabulated triangle kernel") {
  // h(t) = 1 - t/2 on [0, 2]: alpha 1, H(x) = (2-x)^2/4,
  // integral of H beyond x = (2-x)^3/12.
  const auto k = MemoryKernel(TabulatedKernel{{0.0, 1.0, 2.0}, {1.0, 0.5, 0.0}});
  CHECK(k.alpha() == doctest::Approx(1.0));
  CHECK(k.eval(0.5) == doctest::Approx(0.75));
  CHECK(k.eval(3.0) == 0.0);
  for (double x : {0.0, 0.3, 1.0, 1.7, 2.5}) {
    const double y = std::max(0.0, 2.0 - x);
    CHECK(k.tail_mass(x) == doctest::Approx(y * y / 4.0));
    CHECK(k.tail_moment(x) == doctest::Approx(y * y * y / 12.0));
  }
  CHECK(k.support_end() == 2.0);
  CHECK_THROWS_AS(MemoryKernel(TabulatedKernel{{0.0, 1.0}, {0.5, 1.0}}),
                  DomainError);
  CHECK_THROWS_AS(MemoryKernel(TabulatedKernel{{0.1, 1.0}, {1.0, 0.0}}),
                  DomainError);
}

TEST_CASE("sampled kernel integrates like its source") {
  const auto k = MemoryKernel::sampled(
      [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, 50.0, 0.01);
  CHECK(k.alpha() == doctest::Approx(1.0 - 1.0 / 51.0).epsilon(1e-4));
}

TEST_CASE("activations") {
  const auto a = Activation::affine(1.0, 0.5);
  CHECK(a(2.0) == 2.0);
  CHECK(a.is_affine());
  const auto p = Activation::polynomial(1.0, 2.0, 0.5);
  CHECK(p(4.0) == doctest::Approx(3.0));
  const auto t = Activation(TabulatedActivation{{0.0, 1.0}, {1.0, 2.0}, 0.5});
  CHECK(t(0.5) == doctest::Approx(1.5));
  CHECK(t(3.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(a.eval(-1.0), DomainError);
  CHECK_THROWS_AS(Activation::affine(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(Activation::polynomial(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("growth constants") {
  CHECK(beta_growth(Activation::affine(1.0, 0.5)) == 0.5);
  CHECK(beta_growth(Activation::polynomial(1.0, 1.0, 0.5)) == 0.0);
  CHECK(beta_growth(Activation::polynomial(1.0, 1.0, 2.0)) == INFINITY);
  CHECK(beta_growth(Activation::polynomial(2.0, 3.0, 1.0)) == 3.0);
  CHECK(beta_e(Activation::affine(1.0, 0.5)) == 0.5);
  CHECK(beta_e(Activation::polynomial(1.0, 1.0, 2.0)) == INFINITY);
  // Sublinear growth: the windowed average of Phi(s)/s decays like
  // u^{-1/2}; the surrogate's upper half starts near sqrt(u_max) = 1e7.
  const double be = beta_e(Activation::polynomial(1.0, 1.0, 0.5), 1e14);
  CHECK(be < 1.01 / std::sqrt(1e7));
  CHECK(be > 0.0);
}

TEST_CASE("beta_e grid surrogate against direct quadrature") {
  // Tabulated activation: Phi = 1 + 0.4 x beyond 1, so the windowed
  // integral approaches 0.4.
  const auto act =
      Activation(TabulatedActivation{{0.0, 1.0}, {0.2, 1.4}, 0.4});
  const double u = 1e6;
  const double direct = oracle::simpson(
      [&](double s) { return act(s) / s; }, u - 1.0, u, 200);
  CHECK(beta_e(act, 1e12) == doctest::Approx(0.4).epsilon(1e-5));
  CHECK(direct == doctest::Approx(0.4).epsilon(1e-5));
}

TEST_CASE("affine dominator") {
  // sqrt(1 + x) <= 1 + x/2 with equality at 0.
  const auto d = affine_dominator(Activation::polynomial(1.0, 1.0, 0.5), 0.5, 1.0);
  REQUIRE(d);
  CHECK(d->beta0 == 0.5);
  CHECK(d->nu0 == doctest::Approx(1.0).epsilon(1e-9));
  for (double x = 0.0; x < 100.0; x += 0.37)
    CHECK(std::sqrt(1.0 + x) <= d->nu0 + d->beta0 * x);
  const auto a = affine_dominator(Activation::affine(1.0, 0.5), 0.05, 1.0);
  REQUIRE(a);
  CHECK(a->beta0 == doctest::Approx(0.525));
  CHECK(a->nu0 >= 1.0);
  CHECK_FALSE(affine_dominator(Activation::polynomial(1.0, 1.0, 2.0), 0.1, 1.0));
  CHECK_FALSE(affine_dominator(Activation::affine(1.0, 0.99), 0.05, 1.0));
}

TEST_CASE("lipschitz constants") {
  CHECK(*lipschitz_constant(Activation::affine(1.0, 0.7)) == 0.7);
  CHECK(*lipschitz_constant(Activation::polynomial(1.0, 2.0, 0.5)) ==
        doctest::Approx(1.0));
  CHECK_FALSE(lipschitz_constant(Activation::polynomial(1.0, 1.0, 2.0)));
}
