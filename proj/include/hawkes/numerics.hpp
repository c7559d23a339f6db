#ifndef HAWKES_NUMERICS_HPP
#define HAWKES_NUMERICS_HPP

#include <cstddef>
#include <functional>

namespace hawkes::numerics {

using RealFn = std::function<double(double)>;

struct Quadrature {
  double value = 0.0;
  double error = 0.0; // estimated absolute error
  std::size_t evaluations = 0;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b], a <= b. Subdivides until the
// summed error estimate is below abs_tol or max_intervals is reached.
Quadrature integrate_gk(const RealFn &f, double a, double b, double abs_tol,
                        std::size_t max_intervals = 2000);

// Recursive adaptive Simpson with Richardson correction.
Quadrature integrate_simpson(const RealFn &f, double a, double b,
                             double abs_tol, int max_depth = 48);

// Kahan-Babuska (Neumaier) summation.
class CompensatedSum {
public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MonotoneRoot {
  double t = 0.0;
  double residual = 0.0; // F(t) - target
  int iterations = 0;
};

// Solves F(t) = target for F(t) = integral_0^t rate(s) ds with rate
// positive and non-increasing. Newton steps from the left never overshoot
// for such F, so each step only integrates over the new increment.
// increment(a, b) must return integral_a^b rate. Throws UnboundedSearchError
// when t would exceed time_cap.
MonotoneRoot invert_concave_cumulative(
    const std::function<double(double)> &rate,
    const std::function<double(double, double)> &increment, double target,
    double tol, double time_cap);

// Bisection on a non-decreasing function g over [lo, hi] with g(lo) <= 0
// <= g(hi); stops when the bracket is below x_tol or g is within g_tol.
double bisect(const RealFn &g, double lo, double hi, double x_tol,
              double g_tol, int max_iter = 200);

} // namespace hawkes::numerics

#endif // HAWKES_NUMERICS_HPP
