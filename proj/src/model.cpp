#include "hawkes/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hawkes/error.hpp"
#include "hawkes/numerics.hpp"

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void check_finite_nonneg(double v, const char *what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite and >= 0, got " << v;
    throw DomainError(os.str());
  }
}

// Index i with t[i] <= x < t[i+1]; requires t[0] <= x < t.back().
std::size_t segment(const std::vector<double> &t, double x) {
  auto it = std::upper_bound(t.begin(), t.end(), x);
  return static_cast<std::size_t>(it - t.begin()) - 1;
}

} // namespace

// ---------------------------------------------------------------- kernels

MemoryKernel::MemoryKernel(ExponentialKernel k) : v_(k) {
  if (!(k.scale > 0.0) || !std::isfinite(k.scale))
    throw DomainError("exponential kernel scale must be finite and > 0");
  alpha_ = k.scale;
}

MemoryKernel::MemoryKernel(TabulatedKernel k) {
  if (k.t.size() < 2 || k.t.size() != k.h.size())
    throw DomainError("tabulated kernel needs >= 2 samples of equal length");
  if (k.t.front() != 0.0)
    throw DomainError("tabulated kernel grid must start at t = 0");
  for (std::size_t i = 0; i < k.t.size(); ++i) {
    check_finite_nonneg(k.h[i], "kernel value");
    if (i > 0) {
      if (!(k.t[i] > k.t[i - 1]) || !std::isfinite(k.t[i]))
        throw DomainError("tabulated kernel grid must be strictly increasing");
      if (k.h[i] > k.h[i - 1])
        throw DomainError("tabulated kernel must be non-increasing");
    }
  }
  const std::size_t n = k.t.size();
  cum_.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    cum_[i] = cum_[i - 1] + 0.5 * (k.t[i] - k.t[i - 1]) * (k.h[i] + k.h[i - 1]);
  alpha_ = cum_.back();
  if (!(alpha_ > 0.0))
    throw DomainError("tabulated kernel must have positive integral");
  v_ = std::move(k);
}

double MemoryKernel::eval(double t) const {
  if (std::isnan(t) || t < 0.0)
    throw DomainError("kernel evaluated at negative or NaN time");
  if (t == kInf) return 0.0;
  return std::visit(
      overloaded{
          [t](const ExponentialKernel &k) { return std::exp(-t / k.scale); },
          [t](const TabulatedKernel &k) {
            if (t > k.t.back()) return 0.0;
            if (t == k.t.back()) return k.h.back();
            const std::size_t i = segment(k.t, t);
            const double w = (t - k.t[i]) / (k.t[i + 1] - k.t[i]);
            return k.h[i] + w * (k.h[i + 1] - k.h[i]);
          }},
      v_);
}

double MemoryKernel::tail_mass(double x) const {
  if (std::isnan(x) || x < 0.0)
    throw DomainError("tail mass evaluated at negative or NaN time");
  if (x == kInf) return 0.0;
  return std::visit(
      overloaded{[x](const ExponentialKernel &k) {
                   return k.scale * std::exp(-x / k.scale);
                 },
                 [this, x](const TabulatedKernel &k) {
                   if (x >= k.t.back()) return 0.0;
                   const std::size_t i = segment(k.t, x);
                   const double hx = eval(x);
                   const double piece =
                       0.5 * (k.t[i + 1] - x) * (hx + k.h[i + 1]);
                   return (alpha_ - cum_[i + 1]) + piece;
                 }},
      v_);
}

double MemoryKernel::tail_moment(double x) const {
  if (std::isnan(x) || x < 0.0)
    throw DomainError("tail moment evaluated at negative or NaN time");
  if (x == kInf) return 0.0;
  return std::visit(
      overloaded{[x](const ExponentialKernel &k) {
                   return k.scale * k.scale * std::exp(-x / k.scale);
                 },
                 [this, x](const TabulatedKernel &k) {
                   if (x >= k.t.back()) return 0.0;
                   // tail_mass is piecewise quadratic: Simpson is exact on
                   // each grid segment.
                   auto simpson = [this](double a, double b) {
                     return (b - a) / 6.0 *
                            (tail_mass(a) + 4.0 * tail_mass(0.5 * (a + b)) +
                             tail_mass(b));
                   };
                   const std::size_t i = segment(k.t, x);
                   double acc = simpson(x, k.t[i + 1]);
                   for (std::size_t j = i + 1; j + 1 < k.t.size(); ++j)
                     acc += simpson(k.t[j], k.t[j + 1]);
                   return acc;
                 }},
      v_);
}

double MemoryKernel::support_end() const noexcept {
  if (const auto *k = std::get_if<TabulatedKernel>(&v_)) return k->t.back();
  return kInf;
}

std::string MemoryKernel::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const ExponentialKernel &k) {
                          os << "exponential(scale=" << k.scale << ")";
                        },
                        [&](const TabulatedKernel &k) {
                          os << "tabulated(" << k.t.size()
                             << " samples, t_max=" << k.t.back() << ")";
                        }},
             v_);
  return os.str();
}

// ------------------------------------------------------------ activations

Activation::Activation(AffineActivation a) : v_(a) {
  if (!(a.nu > 0.0) || !std::isfinite(a.nu))
    throw DomainError("affine activation needs nu > 0");
  check_finite_nonneg(a.beta, "affine beta");
}

Activation::Activation(PolynomialActivation a) : v_(a) {
  if (!(a.nu > 0.0) || !(a.beta > 0.0) || !(a.gamma > 0.0) ||
      !std::isfinite(a.nu + a.beta + a.gamma))
    throw DomainError("polynomial activation needs nu, beta, gamma > 0");
}

Activation::Activation(TabulatedActivation a) {
  if (a.x.size() < 2 || a.x.size() != a.y.size())
    throw DomainError("tabulated activation needs >= 2 points");
  if (a.x.front() != 0.0)
    throw DomainError("tabulated activation must start at x = 0");
  if (!(a.y.front() > 0.0))
    throw DomainError("tabulated activation needs Phi(0) > 0");
  check_finite_nonneg(a.slope, "asymptotic slope");
  for (std::size_t i = 1; i < a.x.size(); ++i) {
    if (!(a.x[i] > a.x[i - 1]) || !std::isfinite(a.x[i]))
      throw DomainError("tabulated activation abscissae must increase");
    if (!(a.y[i] >= a.y[i - 1]) || !std::isfinite(a.y[i]))
      throw DomainError("tabulated activation must be non-decreasing");
  }
  v_ = std::move(a);
}

double Activation::operator()(double x) const noexcept {
  switch (v_.index()) {
  case 0: {
    const auto &a = *std::get_if<AffineActivation>(&v_);
    return a.nu + a.beta * x;
  }
  case 1: {
    const auto &a = *std::get_if<PolynomialActivation>(&v_);
    const double base = a.nu + a.beta * x;
    if (a.gamma == 2.0) return base * base;
    if (a.gamma == 1.0) return base;
    return std::pow(base, a.gamma);
  }
  default: {
    const auto &a = *std::get_if<TabulatedActivation>(&v_);
    if (x >= a.x.back()) return a.y.back() + a.slope * (x - a.x.back());
    const std::size_t i = segment(a.x, x);
    const double w = (x - a.x[i]) / (a.x[i + 1] - a.x[i]);
    return a.y[i] + w * (a.y[i + 1] - a.y[i]);
  }
  }
}

double Activation::eval(double x) const {
  if (std::isnan(x) || x < 0.0)
    throw DomainError("activation evaluated at negative or NaN argument");
  return (*this)(x);
}

bool Activation::is_affine() const noexcept {
  return std::holds_alternative<AffineActivation>(v_);
}

std::string Activation::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const AffineActivation &a) {
                          os << "affine(nu=" << a.nu << ", beta=" << a.beta
                             << ")";
                        },
                        [&](const PolynomialActivation &a) {
                          os << "polynomial(nu=" << a.nu << ", beta=" << a.beta
                             << ", gamma=" << a.gamma << ")";
                        },
                        [&](const TabulatedActivation &a) {
                          os << "tabulated(" << a.x.size()
                             << " points, slope=" << a.slope << ")";
                        }},
             v_);
  return os.str();
}

double beta_growth(const Activation &act) {
  return std::visit(overloaded{[](const AffineActivation &a) { return a.beta; },
                               [](const PolynomialActivation &a) {
                                 if (a.gamma < 1.0) return 0.0;
                                 if (a.gamma == 1.0) return a.beta;
                                 return kInf;
                               },
                               [](const TabulatedActivation &a) {
                                 return a.slope;
                               }},
                    act.variant());
}

double beta_e(const Activation &act, double u_max, double tol) {
  if (!(u_max >= 2.0)) throw DomainError("beta_e needs u_max >= 2");
  if (const auto *a = std::get_if<AffineActivation>(&act.variant()))
    return a->beta;
  if (std::isinf(beta_growth(act))) return kInf;
  constexpr int kGrid = 65;
  const double ratio = std::log(u_max / 2.0) / (kGrid - 1);
  double sup = 0.0;
  for (int i = kGrid / 2; i < kGrid; ++i) {
    const double u = 2.0 * std::exp(ratio * i);
    const auto q = numerics::integrate_gk(
        [&act](double s) { return act(s) / s; }, u - 1.0, u, tol);
    sup = std::max(sup, q.value);
  }
  return sup;
}

namespace {

// max over x >= 0 of Phi(x) - beta0 x on a verification grid (geometric
// plus linear near zero).
double grid_excess(const Activation &act, double beta0) {
  double worst = act(0.0);
  for (int i = 0; i <= 400; ++i) {
    const double x = 0.05 * i;
    worst = std::max(worst, act(x) - beta0 * x);
  }
  for (int i = 0; i <= 600; ++i) {
    const double x = std::pow(10.0, -3.0 + 0.02 * i);
    worst = std::max(worst, act(x) - beta0 * x);
  }
  return worst;
}

} // namespace

std::optional<AffineDominator> affine_dominator(const Activation &act,
                                                double margin, double alpha) {
  if (!(margin > 0.0)) throw DomainError("dominator margin must be > 0");
  const double growth = beta_growth(act);
  if (std::isinf(growth)) return std::nullopt;
  const double beta0 = growth > 0.0 ? growth * (1.0 + margin) : margin;
  if (alpha * beta0 >= 1.0) return std::nullopt;

  // Analytic supremum of Phi(x) - beta0 x per variant.
  const double analytic = std::visit(
      overloaded{
          [](const AffineActivation &a) { return a.nu; },
          [beta0](const PolynomialActivation &a) {
            if (a.gamma == 1.0) return a.nu;
            // gamma < 1: concave, stationary point where Phi' = beta0.
            const double base =
                std::pow(a.gamma * a.beta / beta0, 1.0 / (1.0 - a.gamma));
            const double x = (base - a.nu) / a.beta;
            if (x <= 0.0) return std::pow(a.nu, a.gamma);
            return std::pow(base, a.gamma) - beta0 * x;
          },
          [beta0](const TabulatedActivation &a) {
            // Piecewise linear: extremes sit at breakpoints; the tail has
            // slope (slope - beta0) <= 0.
            double best = 0.0;
            for (std::size_t i = 0; i < a.x.size(); ++i)
              best = std::max(best, a.y[i] - beta0 * a.x[i]);
            return best;
          }},
      act.variant());
  double nu0 = std::max(analytic, grid_excess(act, beta0));
  nu0 += 1e-12 * (1.0 + std::abs(nu0));
  return AffineDominator{nu0, beta0};
}

std::optional<double> lipschitz_constant(const Activation &act) {
  return std::visit(
      overloaded{[](const AffineActivation &a) -> std::optional<double> {
                   return a.beta;
                 },
                 [](const PolynomialActivation &a) -> std::optional<double> {
                   if (a.gamma > 1.0) return std::nullopt;
                   if (a.gamma == 1.0) return a.beta;
                   return a.gamma * a.beta * std::pow(a.nu, a.gamma - 1.0);
                 },
                 [](const TabulatedActivation &a) -> std::optional<double> {
                   double l = a.slope;
                   for (std::size_t i = 1; i < a.x.size(); ++i)
                     l = std::max(l, (a.y[i] - a.y[i - 1]) /
                                         (a.x[i] - a.x[i - 1]));
                   return l;
                 }},
      act.variant());
}

} // namespace hawkes
