#include "hawkes/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hawkes/error.hpp"
#include "hawkes/numerics.hpp"
#include "hawkes/stats.hpp"

namespace hawkes::linear {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const AffineActivation &require_affine(const ModelParams &model) {
  const auto *a = std::get_if<AffineActivation>(&model.activation.variant());
  if (!a) throw UnsupportedError("backward coupling needs an affine activation");
  if (!(model.kernel.alpha() * a->beta < 1.0))
    throw UnsupportedError("backward coupling needs alpha * beta < 1");
  return *a;
}

// Gaps produced with E_1 .. E_k when the chain is run from the empty state
// through E_n, ..., E_1: element k - 1 is the gap driven by E_k.
std::vector<double> backward_prefix(const ModelParams &model,
                                    const std::vector<double> &stream,
                                    std::size_t n, std::size_t k, double tol) {
  ChainStepper stepper(InterArrivalState(), model, tol);
  std::vector<double> out(std::min(k, n));
  for (std::size_t i = n; i >= 1; --i) {
    const double g = stepper.step(stream[i - 1]);
    if (i <= out.size()) out[i - 1] = g;
  }
  return out;
}

void record(PointPath &p, numerics::CompensatedSum &clock, double gap,
            double e) {
  clock.add(gap);
  p.gaps.push_back(gap);
  p.times.push_back(clock.value());
  p.e_used.push_back(e);
}

} // namespace

BackwardSample backward_sample(const ModelParams &model,
                               const BackwardOptions &opt, CounterRng &rng) {
  const AffineActivation &act = require_affine(model);
  if (opt.k == 0) throw DomainError("backward_sample needs K >= 1");
  if (opt.depth_cap < opt.k)
    throw DomainError("backward_sample depth cap below K");
  BackwardSample s;
  s.nu = act.nu;
  s.alpha_beta = model.kernel.alpha() * act.beta;
  auto ensure = [&](std::size_t n) {
    while (s.stream.size() < n) s.stream.push_back(rng.exponential());
  };
  const double slack = 100.0 * opt.inversion_tol;
  auto audit = [&](const std::vector<double> &deeper,
                   const std::vector<double> &shallower) {
    for (std::size_t k = 0; k < deeper.size(); ++k) {
      const double inc = deeper[k] - shallower[k];
      s.max_increase = std::max(s.max_increase, inc);
      if (inc > slack * (1.0 + shallower[k])) s.monotone = false;
    }
  };
  std::vector<double> previous;
  std::size_t n = opt.k;
  for (;;) {
    ensure(n + 1);
    std::vector<double> at_n =
        backward_prefix(model, s.stream, n, opt.k, opt.inversion_tol);
    std::vector<double> at_next =
        backward_prefix(model, s.stream, n + 1, opt.k, opt.inversion_tol);
    if (!previous.empty()) audit(at_n, previous);
    audit(at_next, at_n);
    double residual = 0.0;
    for (std::size_t k = 0; k < at_n.size(); ++k)
      residual = std::max(residual, at_n[k] - at_next[k]);
    s.residual = residual;
    if (residual < opt.tol) {
      s.converged = true;
      s.prefix = std::move(at_n);
      s.depth_used = n;
      break;
    }
    if (n + 1 >= opt.depth_cap) {
      s.prefix = std::move(at_next);
      s.depth_used = n + 1;
      break;
    }
    previous = std::move(at_next);
    n = std::min(opt.depth_cap - 1,
                 static_cast<std::size_t>(std::ceil(1.5 * n)) + 1);
  }
  return s;
}

IntensityEstimate stationary_intensity(const BackwardSample &sample,
                                       const MemoryKernel &kernel,
                                       std::optional<double> beyond_depth_bound) {
  IntensityEstimate est;
  numerics::CompensatedSum value;
  double offset = 0.0;
  for (std::size_t k = 1; k <= sample.prefix.size(); ++k) {
    if (k >= 2) offset += sample.prefix[k - 1];
    value.add(kernel.eval(offset));
  }
  est.value = value.value();

  // Random-walk minorant over the stored stream, indices K+1 .. depth.
  const std::size_t kk = sample.prefix.size();
  const std::size_t last = std::min(sample.stream.size(),
                                    std::max(sample.depth_used, kk));
  double walk = 0.0; // sum_{j=2}^i (E_j - alpha beta)
  numerics::CompensatedSum tail;
  for (std::size_t i = 2; i <= last; ++i) {
    walk += sample.stream[i - 1] - sample.alpha_beta;
    if (i > kk) tail.add(kernel.eval(std::max(0.0, walk / sample.nu)));
  }
  double beyond;
  if (beyond_depth_bound) {
    beyond = *beyond_depth_bound;
  } else {
    const double s_plus = std::max(0.0, walk / sample.nu);
    beyond = kernel.eval(s_plus) +
             sample.nu / (1.0 - sample.alpha_beta) * kernel.tail_mass(s_plus);
  }
  est.tail_error = tail.value() + beyond;
  return est;
}

DominatedPair dominated_pair(const InterArrivalState &m,
                             const Activation &act,
                             const AffineDominator &dom,
                             const MemoryKernel &kernel, std::size_t n,
                             CounterRng &rng, double tol) {
  const ModelParams nonlinear{kernel, act};
  const ModelParams affine{kernel, Activation::affine(dom.nu0, dom.beta0)};
  ChainStepper x(m, nonlinear, tol);
  ChainStepper y(m, affine, tol);
  DominatedPair out;
  out.max_excess = -kInf;
  numerics::CompensatedSum cx, cy;
  for (std::size_t i = 1; i <= n; ++i) {
    const double e = rng.exponential();
    const double gx = x.step(e);
    const double gy = y.step(e);
    record(out.nonlinear, cx, gx, e);
    record(out.affine, cy, gy, e);
    out.max_excess = std::max(out.max_excess, gy - gx);
    if (gy - gx > 10.0 * tol) {
      std::ostringstream os;
      os.precision(17);
      os << "domination violated at step " << i << ": affine gap " << gy
         << " exceeds nonlinear gap " << gx;
      throw InvariantViolation(os.str());
    }
  }
  return out;
}

double first_passage(const RateFunction &f, double e, double window) {
  if (!(e > 0.0)) throw DomainError("first_passage needs e > 0");
  std::vector<double> marks;
  for (double b : f.breakpoints)
    if (b > 0.0 && b < window) marks.push_back(b);
  std::sort(marks.begin(), marks.end());
  marks.push_back(window);
  constexpr double kQuadTol = 1e-13;
  double a = 0.0, acc = 0.0, step = 0.25;
  std::size_t next_mark = 0;
  while (a < window) {
    while (next_mark < marks.size() && marks[next_mark] <= a) ++next_mark;
    const double b = std::min(a + step, marks[next_mark]);
    const double inc = numerics::integrate_gk(f.rate, a, b, kQuadTol).value;
    if (acc + inc < e) {
      acc += inc;
      a = b;
      step *= 2.0;
      continue;
    }
    // Root inside [a, b]: Newton from the left with bisection safeguard.
    double lo = a, hi = b, acc_lo = acc;
    for (int it = 0; it < 200; ++it) {
      const double r = f.rate(lo);
      double t = r > 0.0 ? lo + (e - acc_lo) / r : 0.5 * (lo + hi);
      if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
      if (!(t > lo && t < hi)) break;
      const double val =
          acc_lo + numerics::integrate_gk(f.rate, lo, t, kQuadTol).value;
      if (std::abs(val - e) <= kQuadTol * std::max(1.0, e)) return t;
      const double width = hi - lo;
      if (val < e) {
        lo = t;
        acc_lo = val;
      } else {
        hi = t;
      }
      if (hi - lo > 0.5 * width) { // slow progress: force a bisection
        const double mid = 0.5 * (lo + hi);
        const double vm =
            acc_lo + numerics::integrate_gk(f.rate, lo, mid, kQuadTol).value;
        if (vm < e) {
          lo = mid;
          acc_lo = vm;
        } else {
          hi = mid;
        }
      }
    }
    return 0.5 * (lo + hi);
  }
  return kInf;
}

ClockPair couple_clocks(const RateFunction &f, const RateFunction &g,
                        CounterRng &rng, double window) {
  std::vector<double> marks = f.breakpoints;
  marks.insert(marks.end(), g.breakpoints.begin(), g.breakpoints.end());
  const RateFunction only_f{
      [&](double u) { return std::max(0.0, f.rate(u) - g.rate(u)); }, marks};
  const RateFunction only_g{
      [&](double u) { return std::max(0.0, g.rate(u) - f.rate(u)); }, marks};
  const RateFunction common{
      [&](double u) { return std::min(f.rate(u), g.rate(u)); }, marks};
  const double e1 = rng.exponential();
  const double e2 = rng.exponential();
  const double e3 = rng.exponential();
  const double t1 = first_passage(only_f, e1, window);
  const double t2 = first_passage(only_g, e2, window);
  const double t3 = first_passage(common, e3, window);
  ClockPair c;
  c.tau_f = std::min(t1, t3);
  c.tau_g = std::min(t2, t3);
  c.coupled = c.tau_f == c.tau_g;
  return c;
}

RenewalCountFit fit_renewal_counts(double nu0, double alpha_beta0,
                                   double x_max, std::size_t grid,
                                   std::size_t trials, CounterRng &rng) {
  if (!(nu0 > 0.0) || !(alpha_beta0 < 1.0) || !(x_max > 0.0) || grid < 2 ||
      trials == 0)
    throw DomainError("fit_renewal_counts: invalid arguments");
  // Lundberg exponent of the walk: returns from height b above x_max have
  // probability about exp(-theta b).
  const double c = std::max(alpha_beta0, 0.0);
  double theta = 1.0;
  if (c > 0.0) {
    auto fn = [c](double th) { return std::log1p(th) - c * th; };
    double hi = 1.0;
    while (fn(hi) > 0.0) hi *= 2.0;
    theta = numerics::bisect([&](double th) { return -fn(th); }, 1e-12, hi,
                             1e-12, 0.0);
  }
  const double stop = x_max + 40.0 / (theta * nu0);
  const double cell = x_max / static_cast<double>(grid - 1);
  std::vector<double> hits(grid, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    double s = 0.0;
    hits[0] += 1.0; // n = 0
    while (s <= stop) {
      s += (rng.exponential() - alpha_beta0) / nu0;
      if (s <= x_max) {
        const double pos = std::max(0.0, s) / cell;
        auto idx = static_cast<std::size_t>(std::ceil(pos));
        hits[std::min(idx, grid - 1)] += 1.0;
      }
    }
  }
  RenewalCountFit fit;
  double run = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    run += hits[i];
    fit.x.push_back(cell * static_cast<double>(i));
    fit.mean_count.push_back(run / static_cast<double>(trials));
  }
  const double mx = stats::mean(fit.x);
  const double my = stats::mean(fit.mean_count);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    sxy += (fit.x[i] - mx) * (fit.mean_count[i] - my);
    sxx += (fit.x[i] - mx) * (fit.x[i] - mx);
  }
  fit.d2 = std::max(0.0, sxy / sxx);
  fit.d1 = 0.0;
  for (std::size_t i = 0; i < grid; ++i)
    fit.d1 = std::max(fit.d1, fit.mean_count[i] - fit.d2 * fit.x[i]);
  return fit;
}

CouplingReport coupling_bound_estimate(const InterArrivalState &z,
                                       const ModelParams &model,
                                       const CouplingOptions &opt,
                                       CounterRng &rng) {
  const auto lip = lipschitz_constant(model.activation);
  if (!lip) throw UnsupportedError("activation is not globally Lipschitz");
  const double alpha = model.kernel.alpha();
  const auto dom = affine_dominator(model.activation, opt.margin, alpha);
  if (!dom) throw UnsupportedError("activation admits no affine dominator");
  CouplingReport rep;
  rep.lipschitz = *lip;

  const double support = model.kernel.support_end();
  const double x_max = std::isfinite(support) ? support : 40.0 * alpha;
  const RenewalCountFit fit =
      fit_renewal_counts(dom->nu0, alpha * dom->beta0, x_max,
                         opt.renewal_grid, opt.renewal_trials, rng);
  rep.d1 = fit.d1;
  rep.d2 = fit.d2;
  double mass = 0.0, moment = 0.0, age = 0.0;
  for (std::size_t k = 1; k <= z.size(); ++k) {
    age += z.gap(k);
    mass += model.kernel.tail_mass(age);
    moment += model.kernel.tail_moment(age);
  }
  rep.bound_value = rep.lipschitz * (rep.d1 * mass + rep.d2 * moment);

  const InterArrivalState empty;
  for (std::size_t trial = 0; trial < opt.trials; ++trial) {
    ChainStepper a(empty, model);
    ChainStepper b(z, model);
    bool coupled = true;
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
      if (std::abs(b.excitation(0.0) - a.excitation(0.0)) <= opt.merge_level)
        break;
      const RateFunction fa{[&a](double s) { return a.intensity(s); }, {}};
      const RateFunction fb{[&b](double s) { return b.intensity(s); }, {}};
      const ClockPair c = couple_clocks(fa, fb, rng);
      if (!c.coupled) {
        coupled = false;
        break;
      }
      a.advance(c.tau_f);
      b.advance(c.tau_g);
    }
    rep.n_coupled += coupled ? 1 : 0;
  }
  rep.n_trials = opt.trials;
  const double n = static_cast<double>(rep.n_trials);
  rep.empirical_rate = static_cast<double>(rep.n_trials - rep.n_coupled) / n;
  rep.standard_error =
      std::sqrt(rep.empirical_rate * (1.0 - rep.empirical_rate) / n);
  return rep;
}

CesaroReport cesaro_diagnostic(const ModelParams &model,
                               const std::vector<std::size_t> &checkpoints,
                               std::size_t k, std::uint64_t seed,
                               std::uint64_t stream, double tol) {
  if (checkpoints.empty() || k == 0)
    throw DomainError("cesaro_diagnostic needs checkpoints and K >= 1");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      checkpoints.front() == 0)
    throw DomainError("checkpoints must be positive and increasing");
  const double growth = beta_growth(model.activation);
  if (!(model.kernel.alpha() * growth < 1.0))
    throw UnsupportedError("Cesaro diagnostic needs alpha * beta < 1");
  SimConfig cfg;
  cfg.seed = seed;
  cfg.stream = stream;
  cfg.max_events = checkpoints.back();
  cfg.inversion_tol = tol;
  const PointPath path = simulate(InterArrivalState(), model, cfg);
  if (path.size() < checkpoints.back())
    throw InvariantViolation("Cesaro run stopped before the last checkpoint");

  CesaroReport rep;
  rep.checkpoints = checkpoints;
  for (int q = 1; q <= 19; ++q) rep.probs.push_back(0.05 * q);
  rep.gaps = path.gaps;
  for (std::size_t n : checkpoints) {
    std::vector<std::vector<double>> per_coord;
    for (std::size_t c = 1; c <= k; ++c) {
      std::vector<double> law(path.gaps.begin(),
                              path.gaps.begin() +
                                  static_cast<std::ptrdiff_t>(
                                      n >= c ? n - c + 1 : 0));
      law.insert(law.end(), std::min(c - 1, n), kInf);
      per_coord.push_back(stats::quantiles(std::move(law), rep.probs));
    }
    rep.quantiles.push_back(std::move(per_coord));
    rep.first_mean.push_back(stats::mean(std::vector<double>(
        path.gaps.begin(), path.gaps.begin() + static_cast<std::ptrdiff_t>(n))));
  }
  for (std::size_t c = 0; c + 1 < checkpoints.size(); ++c) {
    auto head = [&](std::size_t n) {
      return std::vector<double>(path.gaps.begin(),
                                 path.gaps.begin() +
                                     static_cast<std::ptrdiff_t>(n));
    };
    rep.w1.push_back(
        stats::wasserstein1(head(checkpoints[c]), head(checkpoints[c + 1])));
  }
  return rep;
}

} // namespace hawkes::linear
