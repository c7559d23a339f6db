#ifndef HAWKES_MODEL_HPP
#define HAWKES_MODEL_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hawkes {

// h(t) = exp(-t / scale); integral equals scale.
struct ExponentialKernel {
  double scale = 1.0;
};

// Piecewise-linear interpolation of (t_i, h_i) samples starting at t = 0,
// with h = 0 beyond the last grid point.
struct TabulatedKernel {
  std::vector<double> t;
  std::vector<double> h;
};

// Memory function h: non-negative, non-increasing, integrable.
class MemoryKernel {
public:
  using Variant = std::variant<ExponentialKernel, TabulatedKernel>;

  explicit MemoryKernel(ExponentialKernel k);
  explicit MemoryKernel(TabulatedKernel k);

  static MemoryKernel exponential(double scale) {
    return MemoryKernel(ExponentialKernel{scale});
  }
  // Samples f on a uniform grid of [0, t_max].
  template <typename F>
  static MemoryKernel sampled(F &&f, double t_max, double step);

  // h(t) for t >= 0; h(+inf) = 0.
  double eval(double t) const;
  // alpha = integral of h over [0, inf).
  double alpha() const noexcept { return alpha_; }
  // H(x) = integral of h over [x, inf).
  double tail_mass(double x) const;
  // integral_x^inf H(v) dv, the second tail moment used by coupling bounds.
  double tail_moment(double x) const;
  // First time beyond which h is identically zero (inf for exponential).
  double support_end() const noexcept;

  bool is_exponential() const noexcept {
    return std::holds_alternative<ExponentialKernel>(v_);
  }
  const Variant &variant() const noexcept { return v_; }
  std::string describe() const;

private:
  Variant v_;
  double alpha_ = 0.0;
  std::vector<double> cum_; // tabulated: integral over [0, t_i]
};

struct AffineActivation {
  double nu = 1.0;
  double beta = 0.0;
};

// Phi(x) = (nu + beta x)^gamma.
struct PolynomialActivation {
  double nu = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
};

// Piecewise-linear, non-decreasing, starts at x = 0; extrapolated with
// the declared slope beyond the last point.
struct TabulatedActivation {
  std::vector<double> x;
  std::vector<double> y;
  double slope = 0.0;
};

class Activation {
public:
  using Variant =
      std::variant<AffineActivation, PolynomialActivation, TabulatedActivation>;

  explicit Activation(AffineActivation a);
  explicit Activation(PolynomialActivation a);
  explicit Activation(TabulatedActivation a);

  static Activation affine(double nu, double beta) {
    return Activation(AffineActivation{nu, beta});
  }
  static Activation polynomial(double nu, double beta, double gamma) {
    return Activation(PolynomialActivation{nu, beta, gamma});
  }

  double eval(double x) const;
  // Unchecked evaluation for hot loops; x must be >= 0.
  double operator()(double x) const noexcept;

  const Variant &variant() const noexcept { return v_; }
  bool is_affine() const noexcept;
  std::string describe() const;

private:
  Variant v_;
};

struct ModelParams {
  MemoryKernel kernel;
  Activation activation;
};

// limsup Phi(x)/x: +inf for superlinear polynomials.
double beta_growth(const Activation &act);

// Grid surrogate for limsup_u integral_{u-1}^u Phi(s)/s ds: evaluated on a
// 65-point geometric grid of u in [2, u_max], maximum over the upper half of
// the grid. Exact for affine activations; +inf when beta_growth is +inf.
double beta_e(const Activation &act, double u_max = 1e6, double tol = 1e-10);

struct AffineDominator {
  double nu0 = 0.0;
  double beta0 = 0.0;
};

// (nu0, beta0) with Phi(x) <= nu0 + beta0 x for all x >= 0, where
// beta0 = beta_growth * (1 + margin) (or margin itself when the growth rate
// is zero). Empty when no finite dominator exists or alpha * beta0 >= 1.
std::optional<AffineDominator> affine_dominator(const Activation &act,
                                                double margin, double alpha);

// Global Lipschitz constant of Phi on [0, inf); empty when unbounded.
std::optional<double> lipschitz_constant(const Activation &act);

template <typename F>
MemoryKernel MemoryKernel::sampled(F &&f, double t_max, double step) {
  TabulatedKernel k;
  const auto n = static_cast<std::size_t>(t_max / step + 0.5);
  k.t.reserve(n + 1);
  k.h.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == n ? t_max : static_cast<double>(i) * step;
    k.t.push_back(t);
    k.h.push_back(f(t));
  }
  return MemoryKernel(std::move(k));
}

} // namespace hawkes

#endif // HAWKES_MODEL_HPP
