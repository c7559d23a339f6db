#include "hawkes/expmem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hawkes/error.hpp"
#include "hawkes/numerics.hpp"

namespace hawkes::expmem {

namespace {

constexpr double kTimeCap = 1e6;
// Below this log-ratio the interval [z e^{-v}, z] is too short to be
// represented accurately in u, so quadrature switches to the log variable.
constexpr double kLogVariableBelow = 1e-3;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("memory scale alpha must be finite and > 0");
}

void check_z(double z) {
  if (!(z >= 1.0) || !std::isfinite(z))
    throw DomainError("Z-chain state must be finite and >= 1");
}

// Integer exponent of a polynomial activation, or -1.
int integer_power(const PolynomialActivation &p) {
  if (p.gamma <= 32.0 && p.gamma == std::floor(p.gamma))
    return static_cast<int>(p.gamma);
  return -1;
}

} // namespace

double z_from_state(const InterArrivalState &x, double alpha) {
  check_alpha(alpha);
  return excitation_sum(x, 0.0, MemoryKernel::exponential(alpha)).value;
}

double forward_integral(double z, double t, const Activation &act,
                        double alpha, double tol) {
  check_alpha(alpha);
  if (!(z >= 0.0) || !std::isfinite(z))
    throw DomainError("forward_integral needs finite z >= 0");
  if (std::isnan(t) || t < 0.0)
    throw DomainError("forward_integral needs t >= 0");
  if (t == 0.0) return 0.0;
  const double v = t / alpha;
  // -expm1(-j v) / j, the exact integral of e^{-j r} over [0, v].
  auto decay = [v](int j) { return -std::expm1(-j * v) / j; };
  if (const auto *a = std::get_if<AffineActivation>(&act.variant()))
    return a->nu * t + a->beta * z * alpha * decay(1);
  if (const auto *p = std::get_if<PolynomialActivation>(&act.variant())) {
    const int g = integer_power(*p);
    if (g >= 0) {
      // (nu + beta z e^{-r})^g expanded binomially.
      double acc = std::pow(p->nu, g) * t;
      double binom = 1.0;
      const double bz = p->beta * z;
      for (int j = 1; j <= g; ++j) {
        binom = binom * (g - j + 1) / j;
        acc += binom * std::pow(p->nu, g - j) * std::pow(bz, j) * alpha *
               decay(j);
      }
      return acc;
    }
  }
  const double phi0 = act(0.0);
  double excess;
  if (v >= kLogVariableBelow) {
    const double lo = z * std::exp(-v);
    excess = numerics::integrate_gk(
                 [&](double u) { return (act(u) - phi0) / u; }, lo, z,
                 tol / alpha)
                 .value;
  } else {
    excess = numerics::integrate_gk(
                 [&](double r) { return act(z * std::exp(-r)) - phi0; }, 0.0,
                 v, tol / alpha)
                 .value;
  }
  return alpha * (phi0 * v + excess);
}

double g_phi(double z, double y, const Activation &act, double alpha,
             double tol) {
  check_alpha(alpha);
  check_z(z);
  if (!(y > 0.0) || !std::isfinite(y))
    throw DomainError("g_phi needs finite y > 0");
  const double qtol = 0.125 * tol;
  auto rate = [&](double s) { return act(z * std::exp(-s / alpha)); };
  auto increment = [&](double a, double b) {
    return forward_integral(z * std::exp(-a / alpha), b - a, act, alpha, qtol);
  };
  return numerics::invert_concave_cumulative(rate, increment, y, tol,
                                             kTimeCap)
      .t;
}

ZStep z_step(double z, double e, const Activation &act, double alpha,
             double tol) {
  check_z(z);
  ZStep s;
  const double log_first = std::log(e) - std::log(act(z));
  if (log_first < std::log(1e-300)) {
    // The intensity is constant to working precision over such a gap.
    s.log_gap = log_first;
    s.gap = std::exp(log_first);
    s.z = 1.0 + z;
    return s;
  }
  s.gap = g_phi(z, e, act, alpha, tol);
  s.log_gap = std::log(s.gap);
  s.z = 1.0 + std::exp(-s.gap / alpha) * z;
  return s;
}

ZPath simulate_z(double z0, std::size_t n_events, const Activation &act,
                 double alpha, CounterRng &rng, double tol) {
  check_z(z0);
  ZPath p;
  p.gaps.reserve(n_events);
  p.log_gaps.reserve(n_events);
  p.e.reserve(n_events);
  p.z.reserve(n_events + 1);
  p.z.push_back(z0);
  double z = z0;
  for (std::size_t n = 0; n < n_events; ++n) {
    const double e = rng.exponential();
    const ZStep s = z_step(z, e, act, alpha, tol);
    p.gaps.push_back(s.gap);
    p.log_gaps.push_back(s.log_gap);
    p.e.push_back(e);
    p.z.push_back(s.z);
    z = s.z;
  }
  return p;
}

double lyapunov_f(double y, const Activation &act, double quad_tol) {
  if (!(y > 1.0) || !std::isfinite(y))
    throw DomainError("lyapunov_f needs finite y > 1");
  const double b = y - 1.0;
  const double log_b = std::log1p(y - 2.0);
  if (const auto *a = std::get_if<AffineActivation>(&act.variant()))
    return a->nu * log_b + a->beta * (y - 2.0);
  if (const auto *p = std::get_if<PolynomialActivation>(&act.variant())) {
    const int g = integer_power(*p);
    if (g >= 0) {
      double acc = std::pow(p->nu, g) * log_b;
      double binom = 1.0;
      for (int j = 1; j <= g; ++j) {
        binom = binom * (g - j + 1) / j;
        acc += binom * std::pow(p->nu, g - j) * std::pow(p->beta, j) *
               std::expm1(j * log_b) / j;
      }
      return acc;
    }
  }
  const double phi0 = act(0.0);
  auto excess = [&](double u) { return (act(u) - phi0) / u; };
  const double lo = std::min(1.0, b), hi = std::max(1.0, b);
  const double q = numerics::integrate_gk(excess, lo, hi, quad_tol).value;
  return phi0 * log_b + (b >= 1.0 ? q : -q);
}

double lyapunov_drift(double z0, const Activation &act, double alpha,
                      double quad_tol) {
  check_alpha(alpha);
  if (!(z0 > 1.0)) throw DomainError("lyapunov_drift needs z0 > 1");
  return lyapunov_f(z0 + 1.0, act, quad_tol) - lyapunov_f(z0, act, quad_tol) -
         1.0 / alpha;
}

ZPath stationary_z(const Activation &act, double alpha, std::size_t n_burn,
                   std::size_t n_keep, CounterRng &rng, double tol) {
  check_alpha(alpha);
  const double be = beta_e(act);
  if (!(alpha * be < 1.0)) {
    std::ostringstream os;
    os << "no stationary regime: alpha * beta_e = " << alpha * be
       << " is not below 1";
    throw UnsupportedError(os.str());
  }
  double z = 1.0;
  for (std::size_t n = 0; n < n_burn; ++n)
    z = z_step(z, rng.exponential(), act, alpha, tol).z;
  return simulate_z(z, n_keep, act, alpha, rng, tol);
}

std::vector<double> palm_gaps_from_z(const std::vector<double> &z_path,
                                     const std::vector<double> &e_path,
                                     const Activation &act, double alpha,
                                     double tol) {
  if (z_path.size() < e_path.size())
    throw DomainError("Z path shorter than increment path");
  std::vector<double> gaps;
  gaps.reserve(e_path.size());
  for (std::size_t n = 0; n < e_path.size(); ++n)
    gaps.push_back(g_phi(z_path[n], e_path[n], act, alpha, tol));
  return gaps;
}

TransientReport transient_experiment(double gamma, double nu, double beta,
                                     double alpha, std::size_t n_events,
                                     CounterRng &rng, double tol,
                                     std::size_t windows) {
  if (!(gamma >= 2.0))
    throw DomainError("transient experiment needs gamma >= 2");
  if (n_events < 40) throw DomainError("transient experiment needs >= 40 events");
  const Activation act = Activation::polynomial(nu, beta, gamma);
  TransientReport r;
  r.gamma = gamma;
  r.beta = beta;
  r.nu = nu;
  r.alpha = alpha;
  r.n_events = n_events;
  const ZPath path = simulate_z(1.0, n_events, act, alpha, rng, tol);
  r.z = path.z;
  r.final_ratio = path.z.back() / static_cast<double>(n_events);
  numerics::CompensatedSum clock;
  for (double g : path.gaps) clock.add(g);
  r.total_time = clock.value();

  // gaps[n] is X_{n+1}, the gap following Z_n.
  const std::size_t first = std::max<std::size_t>(1, (3 * n_events + 3) / 4);
  const double log_beta = std::log(beta);
  for (std::size_t n = first; n < n_events; ++n) {
    const double log_r =
        gamma * (log_beta + std::log(static_cast<double>(n))) +
        path.log_gaps[n];
    r.rescaled_index.push_back(n);
    r.rescaled_gaps.push_back(std::exp(log_r));
  }
  r.ks = stats::ks_one_sample(r.rescaled_gaps, stats::exponential_cdf(1.0));

  std::vector<double> positions;
  positions.reserve(r.rescaled_gaps.size());
  numerics::CompensatedSum pos;
  for (double g : r.rescaled_gaps) {
    pos.add(g);
    positions.push_back(pos.value());
  }
  const double width = positions.back() / static_cast<double>(windows);
  std::vector<double> counts(windows, 0.0);
  for (double p : positions) {
    auto k = static_cast<std::size_t>(p / width);
    if (k >= windows) k = windows - 1;
    counts[k] += 1.0;
  }
  r.windows = windows;
  r.dispersion = stats::poisson_dispersion(counts);
  return r;
}

} // namespace hawkes::expmem
