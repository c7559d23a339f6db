#include "hawkes/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "hawkes/error.hpp"
#include "hawkes/numerics.hpp"

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw DomainError("tolerance must be finite and > 0");
}

void check_increment(double e) {
  if (!(e > 0.0) || !std::isfinite(e))
    throw DomainError("compensator increment must be finite and > 0");
}

// Ages (time since each kept point at s = 0) of the points of x that can
// still contribute to a tabulated kernel.
std::vector<double> ages_in_support(const double *chron, std::size_t n,
                                    double support) {
  std::vector<double> ages{0.0};
  double age = 0.0;
  for (std::size_t k = n; k >= 1; --k) {
    age += chron[k - 1];
    if (age >= support) break;
    ages.push_back(age);
  }
  return ages;
}

// Splits [a, b] where the intensity can have kinks: kernel grid nodes
// shifted by each age, then crossings of the activation grid by the
// excitation, which is linear (tabulated kernel) or exponential between
// kernel nodes. Returns the sorted cut points including a and b.
template <typename Ages>
std::vector<double> kink_cuts(const ModelParams &m, const Ages &ages, double a,
                              double b,
                              const std::function<double(double)> &excitation) {
  std::vector<double> cuts{a, b};
  if (const auto *tk = std::get_if<TabulatedKernel>(&m.kernel.variant())) {
    for (double age : ages) {
      auto it = std::upper_bound(tk->t.begin(), tk->t.end(), a + age);
      for (; it != tk->t.end() && *it - age < b; ++it)
        if (*it - age > a) cuts.push_back(*it - age);
    }
    std::sort(cuts.begin(), cuts.end());
  }
  const auto *ta = std::get_if<TabulatedActivation>(&m.activation.variant());
  if (!ta) return cuts;
  std::vector<double> out{cuts.front()};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i], r = cuts[i + 1];
    const double sl = excitation(l), sr = excitation(r);
    auto lo = std::upper_bound(ta->x.begin(), ta->x.end(), sr);
    auto hi = std::lower_bound(ta->x.begin(), ta->x.end(), sl);
    // Decreasing excitation crosses the grid from the top down.
    for (auto it = hi; it > lo;) {
      const double xj = *--it;
      double s;
      if (m.kernel.is_exponential())
        s = l + m.kernel.alpha() * std::log(sl / xj);
      else
        s = l + (sl - xj) / (sl - sr) * (r - l);
      if (s > out.back() && s < r) out.push_back(s);
    }
    out.push_back(r);
  }
  return out;
}

bool has_kinks(const ModelParams &m) {
  return !m.kernel.is_exponential() ||
         std::holds_alternative<TabulatedActivation>(m.activation.variant());
}

template <typename Rule>
double integrate_cuts(const std::vector<double> &cuts, double tol,
                      Rule &&rule) {
  const double width = cuts.back() - cuts.front();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += rule(cuts[i], cuts[i + 1],
                  tol * (cuts[i + 1] - cuts[i]) / width);
  return total;
}

} // namespace

const char *path_status_name(PathStatus s) noexcept {
  switch (s) {
  case PathStatus::kCompleted: return "Completed";
  case PathStatus::kHorizonReached: return "HorizonReached";
  case PathStatus::kBlowUpSuspected: return "BlowUpSuspected";
  }
  return "Unknown";
}

ChainStepper::ChainStepper(const InterArrivalState &x0,
                           const ModelParams &model, double tol,
                           double time_cap)
    : model_(model), tol_(tol), time_cap_(time_cap),
      exponential_(model.kernel.is_exponential()) {
  check_tol(tol);
  if (exponential_) {
    scale_ = std::get<ExponentialKernel>(model_.kernel.variant()).scale;
    amplitude_ = excitation_sum(x0, 0.0, model_.kernel).value;
  } else {
    const double support = model_.kernel.support_end();
    offsets_.push_back(0.0);
    double age = 0.0;
    for (std::size_t k = 1; k <= x0.size(); ++k) {
      age += x0.gap(k);
      if (age >= support) break;
      offsets_.push_back(age);
    }
  }
}

double ChainStepper::excitation(double s) const {
  if (exponential_) return amplitude_ * std::exp(-s / scale_);
  double v = 0.0;
  for (double age : offsets_) v += model_.kernel.eval(s + age);
  return v;
}

double ChainStepper::integrate(double a, double b, double tol) const {
  auto rate = [this](double s) { return intensity(s); };
  if (!has_kinks(model_) || !(b > a))
    return numerics::integrate_gk(rate, a, b, tol).value;
  const auto cuts = kink_cuts(model_, offsets_, a, b,
                              [this](double s) { return excitation(s); });
  return integrate_cuts(cuts, tol, [&](double l, double r, double t) {
    return numerics::integrate_gk(rate, l, r, t).value;
  });
}

double ChainStepper::next_gap(double e) const {
  check_increment(e);
  const double qtol = 0.125 * tol_;
  return numerics::invert_concave_cumulative(
             [this](double s) { return intensity(s); },
             [this, qtol](double a, double b) { return integrate(a, b, qtol); },
             e, tol_, time_cap_)
      .t;
}

void ChainStepper::advance(double gap) {
  if (!(gap > 0.0) || !std::isfinite(gap))
    throw DomainError("gap must be finite and > 0");
  if (exponential_) {
    amplitude_ = 1.0 + amplitude_ * std::exp(-gap / scale_);
    if (amplitude_ > kDefaultDivergenceCap)
      throw DivergenceError("excitation exceeds divergence cap");
    return;
  }
  const double support = model_.kernel.support_end();
  for (double &age : offsets_) age += gap;
  while (!offsets_.empty() && offsets_.back() >= support) offsets_.pop_back();
  offsets_.push_front(0.0);
}

double cumulative_intensity(const InterArrivalState &x, double t,
                            const ModelParams &model, double tol) {
  if (std::isnan(t) || t < 0.0)
    throw DomainError("cumulative intensity needs t >= 0");
  if (t == 0.0) return 0.0;
  const ChainStepper stepper(x, model, tol);
  return stepper.integrate(0.0, t, tol);
}

double next_gap_inverse(const InterArrivalState &x, double e,
                        const ModelParams &model, double tol,
                        double time_cap) {
  return ChainStepper(x, model, tol, time_cap).next_gap(e);
}

double next_gap_direct(const InterArrivalState &x, double e,
                       const ModelParams &model, double tol, double eps_tail,
                       double time_cap) {
  check_tol(tol);
  check_increment(e);
  auto excitation = [&](double s) {
    return excitation_sum(x, s, model.kernel, eps_tail).value;
  };
  auto rate = [&](double s) { return model.activation(excitation(s)); };
  const std::vector<double> ages =
      has_kinks(model) ? ages_in_support(x.chronological().data(), x.size(),
                                         model.kernel.support_end())
                       : std::vector<double>{};
  auto increment = [&](double a, double b) {
    if (!has_kinks(model))
      return numerics::integrate_gk(rate, a, b, 0.125 * tol).value;
    return integrate_cuts(kink_cuts(model, ages, a, b, excitation), 0.125 * tol,
                          [&](double l, double r, double t) {
                            return numerics::integrate_gk(rate, l, r, t).value;
                          });
  };
  return numerics::invert_concave_cumulative(rate, increment, e, tol, time_cap)
      .t;
}

InterArrivalState kernel_step_with(const InterArrivalState &x, double e,
                                   const ModelParams &model, double tol) {
  return prepend_gap(x, next_gap_inverse(x, e, model, tol));
}

InterArrivalState kernel_step(const InterArrivalState &x, CounterRng &rng,
                              const ModelParams &model, double tol) {
  return kernel_step_with(x, rng.exponential(), model, tol);
}

PointPath simulate(const InterArrivalState &x0, const ModelParams &model,
                   const SimConfig &cfg) {
  check_tol(cfg.inversion_tol);
  if (!(cfg.min_gap > 0.0)) throw DomainError("min_gap must be > 0");
  ChainStepper stepper(x0, model, cfg.inversion_tol, cfg.time_cap);
  CounterRng rng(cfg.seed, cfg.stream);
  PointPath path;
  path.gaps.reserve(cfg.max_events);
  path.times.reserve(cfg.max_events);
  path.e_used.reserve(cfg.max_events);
  numerics::CompensatedSum clock;
  path.status = PathStatus::kCompleted;
  for (std::size_t n = 0; n < cfg.max_events; ++n) {
    const double e = rng.exponential();
    const double g = stepper.next_gap(e);
    numerics::CompensatedSum next = clock;
    next.add(g);
    if (cfg.horizon && next.value() > *cfg.horizon) {
      path.status = PathStatus::kHorizonReached;
      break;
    }
    clock = next;
    path.gaps.push_back(g);
    path.times.push_back(clock.value());
    path.e_used.push_back(e);
    if (g < cfg.min_gap) {
      path.status = PathStatus::kBlowUpSuspected;
      break;
    }
    stepper.advance(g);
  }
  return path;
}

std::vector<double> compensator_increments(const PointPath &path,
                                           const InterArrivalState &x0,
                                           const ModelParams &model,
                                           double tol, double eps_tail) {
  check_tol(tol);
  if (path.e_used.size() != path.gaps.size())
    throw IntegrityError("path has mismatched gap and increment lengths");
  std::vector<double> chron = x0.chronological();
  chron.reserve(chron.size() + path.gaps.size());
  std::vector<double> out;
  out.reserve(path.gaps.size());
  for (std::size_t n = 0; n < path.gaps.size(); ++n) {
    const double *data = chron.data();
    const std::size_t len = chron.size();
    auto excitation = [&](double s) {
      return excitation_sum_span(data, len, x0.tail_infinite(), s,
                                 model.kernel, eps_tail, kDefaultDivergenceCap)
          .value;
    };
    auto rate = [&](double s) { return model.activation(excitation(s)); };
    auto simpson = [&](double l, double r, double t) {
      return numerics::integrate_simpson(rate, l, r, t).value;
    };
    double e;
    if (has_kinks(model)) {
      const auto ages =
          ages_in_support(data, len, model.kernel.support_end());
      e = integrate_cuts(kink_cuts(model, ages, 0.0, path.gaps[n], excitation),
                         tol, simpson);
    } else {
      e = simpson(0.0, path.gaps[n], tol);
    }
    if (std::abs(e - path.e_used[n]) > 10.0 * tol) {
      std::ostringstream os;
      os.precision(17);
      os << "compensator increment " << (n + 1) << " recomputed as " << e
         << " but the path recorded " << path.e_used[n];
      throw IntegrityError(os.str());
    }
    out.push_back(e);
    chron.push_back(path.gaps[n]);
  }
  return out;
}

double next_gap_thinning(const InterArrivalState &x, CounterRng &rng,
                         const ModelParams &model, double time_cap) {
  const ChainStepper stepper(x, model);
  double t = 0.0;
  double bound = stepper.intensity(0.0);
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw DomainError("intensity must be positive and finite");
  for (;;) {
    t += rng.exponential() / bound;
    if (t > time_cap)
      throw UnboundedSearchError("thinning passed the time cap");
    const double lam = stepper.intensity(t);
    if (rng.uniform() * bound <= lam) return t;
    bound = lam;
  }
}

RandomWalkCheck random_walk_bound_check(const PointPath &path,
                                        const ModelParams &model,
                                        double margin, double tol) {
  const double alpha = model.kernel.alpha();
  const auto dom = affine_dominator(model.activation, margin, alpha);
  if (!dom)
    throw UnsupportedError("activation admits no affine dominator with "
                           "alpha * beta0 < 1");
  const double nu0 = dom->nu0;
  const double beta0 = dom->beta0;
  const bool exponential = model.kernel.is_exponential();
  const double support = model.kernel.support_end();
  RandomWalkCheck out;
  numerics::CompensatedSum lhs, elapsed;
  double decay_sum = 0.0; // exponential: sum_k exp(-(T_n - T_{k-1}) / alpha)
  for (std::size_t n = 1; n <= path.size(); ++n) {
    const double x = path.gaps[n - 1];
    lhs.add(path.e_used[n - 1] - alpha * beta0);
    elapsed.add(x);
    double tail_sum;
    if (exponential) {
      decay_sum = std::exp(-x / alpha) * (decay_sum + 1.0);
      tail_sum = alpha * decay_sum;
    } else {
      tail_sum = 0.0;
      double offset = 0.0;
      for (std::size_t k = n; k >= 1; --k) {
        offset += path.gaps[k - 1];
        if (offset >= support) break;
        tail_sum += model.kernel.tail_mass(offset);
      }
    }
    const double rhs = nu0 * elapsed.value() - beta0 * tail_sum;
    const double scale = std::abs(lhs.value()) + nu0 * elapsed.value() +
                         beta0 * tail_sum + static_cast<double>(n) * alpha *
                                                beta0;
    const double slack = static_cast<double>(n) * 10.0 * tol + 1e-12 * scale;
    const double excess = lhs.value() - rhs - slack;
    out.max_excess = std::max(out.max_excess, excess);
    if (excess > 0.0) {
      if (out.violations == 0) out.first_violation = n;
      ++out.violations;
      out.holds = false;
    }
  }
  return out;
}

} // namespace hawkes
