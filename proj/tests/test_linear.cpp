#include <doctest.h>

#include <cmath>

#include "hawkes/error.hpp"
#include "hawkes/linear.hpp"
#include "hawkes/stats.hpp"

using namespace hawkes;
using namespace hawkes::linear;

namespace {

ModelParams affine_exp(double nu, double beta, double alpha = 1.0) {
  return {MemoryKernel::exponential(alpha), Activation::affine(nu, beta)};
}

} // namespace

TEST_CASE("backward sample without self-excitation is the raw stream") {
  CounterRng rng(1);
  BackwardOptions opt;
  opt.k = 3;
  const auto s = backward_sample(affine_exp(2.0, 0.0), opt, rng);
  REQUIRE(s.prefix.size() == 3);
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(s.prefix[k] == doctest::Approx(s.stream[k] / 2.0).epsilon(1e-10));
  CHECK(s.converged);
}

TEST_CASE("backward sample is monotone, convergent and reproducible") {
  BackwardOptions opt;
  opt.k = 2;
  CounterRng a(7), b(7);
  const auto s = backward_sample(affine_exp(1.0, 0.8, 1.0), opt, a);
  const auto t = backward_sample(affine_exp(1.0, 0.8, 1.0), opt, b);
  CHECK(s.prefix == t.prefix);
  CHECK(s.converged);
  CHECK(s.monotone);
  CHECK(s.residual < opt.tol);
  CHECK(s.depth_used >= opt.k);
  CHECK(s.nu == 1.0);
  CHECK(s.alpha_beta == doctest::Approx(0.8));
  // The depth-n chain from the empty state reproduces the prefix.
  const ModelParams m = affine_exp(1.0, 0.8, 1.0);
  ChainStepper chain({}, m, opt.inversion_tol);
  std::vector<double> gaps;
  for (std::size_t j = s.depth_used; j >= 1; --j)
    gaps.push_back(chain.step(s.stream[j - 1]));
  CHECK(gaps.back() == doctest::Approx(s.prefix[0]).epsilon(1e-8));
  CHECK(gaps[gaps.size() - 2] == doctest::Approx(s.prefix[1]).epsilon(1e-8));
}

TEST_CASE("backward coupling rejects unsupported models") {
  CounterRng rng(1);
  CHECK_THROWS_AS(backward_sample(affine_exp(1.0, 1.2), {}, rng),
                  UnsupportedError);
  const ModelParams p{MemoryKernel::exponential(1.0),
                      Activation::polynomial(1.0, 1.0, 0.5)};
  CHECK_THROWS_AS(backward_sample(p, {}, rng), UnsupportedError);
}

TEST_CASE("stationary intensity sums the kernel over the prefix") {
  BackwardSample s;
  s.prefix = {0.4, 0.3, 0.2};
  s.stream = {1.0, 1.0, 1.0};
  s.nu = 1.0;
  s.alpha_beta = 0.5;
  const auto k = MemoryKernel::exponential(1.0);
  const auto est = stationary_intensity(s, k, 0.0);
  CHECK(est.value ==
        doctest::Approx(1.0 + std::exp(-0.3) + std::exp(-0.5)));
  CHECK(est.tail_error >= 0.0);
  CHECK(stationary_intensity(s, k, 0.25).tail_error ==
        doctest::Approx(est.tail_error + 0.25));
}

TEST_CASE("dominated pair respects the ordering") {
  const Activation act = Activation::polynomial(1.0, 1.0, 0.5);
  const auto dom = affine_dominator(act, 0.5, 1.0);
  REQUIRE(dom);
  CounterRng rng(3);
  const auto pair = dominated_pair({}, act, *dom, MemoryKernel::exponential(1.0),
                                   300, rng);
  REQUIRE(pair.affine.size() == 300);
  for (std::size_t k = 0; k < 300; ++k)
    CHECK(pair.affine.gaps[k] <= pair.nonlinear.gaps[k] + 1e-9);
  CHECK(pair.nonlinear.e_used == pair.affine.e_used);
}

TEST_CASE("first passage of piecewise constant rates") {
  const RateFunction f{[](double u) { return u < 1.0 ? 2.0 : 0.5; }, {1.0}};
  CHECK(first_passage(f, 1.0, 100.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(first_passage(f, 3.0, 100.0) == doctest::Approx(3.0).epsilon(1e-12));
  const RateFunction zero{[](double) { return 0.0; }, {}};
  CHECK(first_passage(zero, 1.0, 50.0) == INFINITY);
}

TEST_CASE("clock coupling") {
  const RateFunction one{[](double) { return 1.0; }, {}};
  CounterRng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto c = couple_clocks(one, one, rng);
    CHECK(c.coupled);
    CHECK(c.tau_f == c.tau_g);
  }
  // f = 2 on [0, 0.1], 1 after; g = 1: P(mismatch) = (1 - e^{-0.2}) / 2.
  const RateFunction f{[](double u) { return u <= 0.1 ? 2.0 : 1.0; }, {0.1}};
  std::size_t miss = 0;
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) miss += couple_clocks(f, one, rng).coupled ? 0 : 1;
  const double p = (1.0 - std::exp(-0.2)) / 2.0;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(static_cast<double>(miss) / n - p) < 4.0 * se);
}

TEST_CASE("renewal counts of a Poisson walk") {
  // alpha beta0 = 0, nu0 = 1: S_n is a rate-1 Poisson walk and
  // E N(0, x) = 1 + x (n = 0 included).
  CounterRng rng(8);
  const auto fit = fit_renewal_counts(1.0, 0.0, 10.0, 11, 4000, rng);
  CHECK(fit.x.size() == 11);
  for (std::size_t i = 0; i < fit.x.size(); ++i)
    CHECK(fit.mean_count[i] == doctest::Approx(1.0 + fit.x[i]).epsilon(0.05));
  CHECK(fit.d2 == doctest::Approx(1.0).epsilon(0.05));
  for (std::size_t i = 0; i < fit.x.size(); ++i)
    CHECK(fit.d1 + fit.d2 * fit.x[i] >= fit.mean_count[i] - 1e-12);
}

TEST_CASE("coupling bound dominates the empirical non-coupling rate") {
  CouplingOptions opt;
  opt.trials = 400;
  opt.renewal_trials = 500;
  CounterRng rng(6);
  const auto rep = coupling_bound_estimate(InterArrivalState({1.0}),
                                           {MemoryKernel::exponential(1.0),
                                            Activation::affine(1.0, 0.5)},
                                           opt, rng);
  CHECK(rep.n_trials == 400);
  CHECK(rep.lipschitz == 0.5);
  CHECK(rep.empirical_rate <= rep.bound_value + 3 * rep.standard_error);
}

TEST_CASE("Cesaro diagnostic") {
  const auto rep =
      cesaro_diagnostic(affine_exp(1.0, 0.5), {200, 400}, 2, 3, 0, 1e-10);
  CHECK(rep.gaps.size() == 400);
  REQUIRE(rep.quantiles.size() == 2);
  CHECK(rep.quantiles[0].size() == 2);
  CHECK(rep.w1.size() == 1);
  std::vector<double> head(rep.gaps.begin(), rep.gaps.begin() + 200);
  CHECK(rep.first_mean[0] == doctest::Approx(stats::mean(head)));
  CHECK(rep.w1[0] ==
        doctest::Approx(stats::wasserstein1(head, rep.gaps)));
}
