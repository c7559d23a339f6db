#ifndef HAWKES_EXPMEM_HPP
#define HAWKES_EXPMEM_HPP

#include <cstddef>
#include <vector>

#include "hawkes/history.hpp"
#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

// Exponential memory h(t) = exp(-t / alpha): the history enters the
// intensity only through Z_n = sum_{k<=n} exp(-(T_n - T_k) / alpha), which
// evolves as Z_{n+1} = 1 + exp(-X_{n+1} / alpha) Z_n.
namespace hawkes::expmem {

// Z_0 of a state: the excitation sum at 0 under the exponential kernel.
double z_from_state(const InterArrivalState &x, double alpha);

// integral_0^t Phi(z exp(-s / alpha)) ds, evaluated through the substitution
// u = z exp(-s / alpha) as alpha * integral_{z exp(-t/alpha)}^z Phi(u)/u du.
// Closed forms for affine and integer-power polynomial activations,
// adaptive quadrature otherwise.
double forward_integral(double z, double t, const Activation &act,
                        double alpha, double tol = 1e-12);

// G(z, y): the t solving forward_integral(z, t) = y.
double g_phi(double z, double y, const Activation &act, double alpha,
             double tol = 1e-10);

struct ZStep {
  double gap = 0.0;
  double log_gap = 0.0; // kept when the gap underflows
  double z = 1.0;       // Z after the event
};

ZStep z_step(double z, double e, const Activation &act, double alpha,
             double tol = 1e-10);

struct ZPath {
  std::vector<double> gaps; // X_1, X_2, ...
  std::vector<double> log_gaps;
  std::vector<double> z;    // Z_0, Z_1, ..., one longer than gaps
  std::vector<double> e;    // E_1, E_2, ...
};

ZPath simulate_z(double z0, std::size_t n_events, const Activation &act,
                 double alpha, CounterRng &rng, double tol = 1e-10);

// F(y) = integral_1^{y-1} Phi(u)/u du (signed).
double lyapunov_f(double y, const Activation &act, double quad_tol = 1e-12);

// E[F(Z_1)] - F(z0) = integral_{z0-1}^{z0} Phi(u)/u du - 1/alpha.
double lyapunov_drift(double z0, const Activation &act, double alpha,
                      double quad_tol = 1e-12);

// Long run from z0 = 1: the first n_burn steps are discarded. Requires
// alpha * beta_e < 1; throws UnsupportedError otherwise.
ZPath stationary_z(const Activation &act, double alpha, std::size_t n_burn,
                   std::size_t n_keep, CounterRng &rng, double tol = 1e-10);

// X_{n+1} = G(Z_n, E_{n+1}) along a recorded Z path.
std::vector<double> palm_gaps_from_z(const std::vector<double> &z_path,
                                     const std::vector<double> &e_path,
                                     const Activation &act, double alpha,
                                     double tol = 1e-10);

struct TransientReport {
  double gamma = 0.0, beta = 0.0, nu = 0.0, alpha = 0.0;
  std::size_t n_events = 0;
  std::vector<double> z;              // Z_0 .. Z_N
  std::vector<std::size_t> rescaled_index; // n for each rescaled gap
  std::vector<double> rescaled_gaps;  // beta^gamma n^gamma X_{n+1}
  double final_ratio = 0.0;           // Z_N / N
  double total_time = 0.0;
  stats::TestResult ks;               // rescaled gaps vs Exp(1)
  stats::TestResult dispersion;       // window counts of rescaled points
  std::size_t windows = 0;
};

// Polynomial activation (nu + beta x)^gamma with gamma >= 2, started from
// the empty state. Rescaled gaps use n in the last quartile of the run;
// window counts use `windows` equal windows over their cumulative sums.
TransientReport transient_experiment(double gamma, double nu, double beta,
                                     double alpha, std::size_t n_events,
                                     CounterRng &rng, double tol = 1e-10,
                                     std::size_t windows = 1000);

} // namespace hawkes::expmem

#endif // HAWKES_EXPMEM_HPP
