#ifndef HAWKES_LINEAR_HPP
#define HAWKES_LINEAR_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hawkes/history.hpp"
#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulator.hpp"

namespace hawkes::linear {

struct BackwardSample {
  std::vector<double> prefix; // approximants of Y_1, ..., Y_K
  std::size_t depth_used = 0;
  bool converged = false;
  double residual = 0.0; // max_k (Y_k^n - Y_k^{n+1}) at the stopping depth
  bool monotone = true;  // every coordinate non-increasing across depths
  double max_increase = 0.0; // largest observed increase in depth
  std::vector<double> stream; // E_1, E_2, ...: E_1 drives the most recent gap
  double nu = 0.0;
  double alpha_beta = 0.0;
};

struct BackwardOptions {
  std::size_t k = 1;
  double tol = 1e-9;
  std::size_t depth_cap = 100000;
  double inversion_tol = 1e-12;
};

// Backward coupling for an affine activation with alpha * beta < 1. The
// depth-n approximation runs the chain from the empty state through
// E_n, ..., E_1 and reads the last K gaps in reverse; depths grow
// geometrically from K, and each checkpoint n is compared with n + 1.
// Throws UnsupportedError when the activation is not affine or
// alpha * beta >= 1.
BackwardSample backward_sample(const ModelParams &model,
                               const BackwardOptions &opt, CounterRng &rng);

struct IntensityEstimate {
  double value = 0.0;      // sum_{k<=K} h(Y_2 + ... + Y_k)
  double tail_error = 0.0; // bound on the omitted terms
};

// The bound on terms k > K uses the random-walk minorant
// Y_2 + ... + Y_i >= S_i = (E_2 + ... + E_i - (i - 1) alpha beta) / nu over
// the stored stream. Beyond the stored depth it adds
// beyond_depth_bound when supplied, otherwise the expected remainder
// h(S^+) + nu / (1 - alpha beta) * Hbar(S^+) at the last stored index.
IntensityEstimate
stationary_intensity(const BackwardSample &sample, const MemoryKernel &kernel,
                     std::optional<double> beyond_depth_bound = std::nullopt);

struct DominatedPair {
  PointPath nonlinear;
  PointPath affine;
  double max_excess = 0.0; // max_n (affine gap - nonlinear gap)
};

// Runs the chain for `act` and for its affine dominator nu0 + beta0 x from
// the same state with the same exponential stream. Throws
// InvariantViolation if an affine gap exceeds the nonlinear one by more
// than 10 tol.
DominatedPair dominated_pair(const InterArrivalState &m,
                             const Activation &act,
                             const AffineDominator &dom,
                             const MemoryKernel &kernel, std::size_t n,
                             CounterRng &rng, double tol = 1e-10);

// Non-negative rate on [0, window]; breakpoints mark kinks or jumps.
struct RateFunction {
  std::function<double(double)> rate;
  std::vector<double> breakpoints;
};

struct ClockPair {
  double tau_f = 0.0; // +inf when the clock never rings inside the window
  double tau_g = 0.0;
  bool coupled = false;
};

// First time the integral of `rate` reaches e, or +inf past `window`.
double first_passage(const RateFunction &f, double e, double window);

// Three independent clocks with rates (f - g)^+, (g - f)^+ and min(f, g);
// tau_f = min(first, third), tau_g = min(second, third).
ClockPair couple_clocks(const RateFunction &f, const RateFunction &g,
                        CounterRng &rng, double window = 1e4);

struct RenewalCountFit {
  double d1 = 0.0; // intercept
  double d2 = 0.0; // slope
  std::vector<double> x;
  std::vector<double> mean_count;
};

// Monte Carlo estimate of E N(0, x), N counting n >= 0 with
// S_n = (E_1 + ... + E_n - n alpha beta0) / nu0 <= x, at `grid` points in
// [0, x_max]; fitted as D1 + D2 x with D2 the least-squares slope and D1 the
// smallest intercept dominating every estimated mean.
RenewalCountFit fit_renewal_counts(double nu0, double alpha_beta0,
                                   double x_max, std::size_t grid,
                                   std::size_t trials, CounterRng &rng);

struct CouplingReport {
  std::size_t n_trials = 0;
  std::size_t n_coupled = 0;
  double empirical_rate = 0.0; // fraction of trials that never coupled
  double standard_error = 0.0;
  double bound_value = 0.0;
  double lipschitz = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct CouplingOptions {
  std::size_t trials = 1000;
  std::size_t max_steps = 10000;
  // The chains are treated as merged once the excitation from z's extra
  // points falls below this level.
  double merge_level = 1e-12;
  double margin = 0.05;
  std::size_t renewal_trials = 2000;
  std::size_t renewal_grid = 41;
};

// Couples the empty-start chain and the z-start chain step by step with
// couple_clocks and compares the non-coupling frequency with
// L (D1 sum_k Hbar(|t_k|) + D2 sum_k integral_{|t_k|}^inf Hbar), the sums
// running over the points t_k < 0 of z.
CouplingReport coupling_bound_estimate(const InterArrivalState &z,
                                       const ModelParams &model,
                                       const CouplingOptions &opt,
                                       CounterRng &rng);

struct CesaroReport {
  std::vector<std::size_t> checkpoints;
  std::vector<double> probs; // quantile levels
  // quantiles[c][k][q]: level probs[q] of coordinate k + 1 under the
  // Cesaro average at checkpoint c; +inf marks coordinates not yet defined.
  std::vector<std::vector<std::vector<double>>> quantiles;
  std::vector<double> first_mean; // mean of coordinate 1 per checkpoint
  std::vector<double> w1;         // W1 of coordinate 1, checkpoint c vs c+1
  std::vector<double> gaps;       // the simulated gaps X_1 .. X_nmax
};

// Cesaro averages (1/n) sum_{m<=n} delta_{X_m} of the empty-start chain: the
// k-th coordinate law at n is the empirical law of X_1 .. X_{n-k+1}
// together with k - 1 infinite coordinates.
CesaroReport cesaro_diagnostic(const ModelParams &model,
                               const std::vector<std::size_t> &checkpoints,
                               std::size_t k, std::uint64_t seed,
                               std::uint64_t stream = 0,
                               double tol = 1e-10);

} // namespace hawkes::linear

#endif // HAWKES_LINEAR_HPP
