#ifndef HAWKES_TESTS_ORACLES_HPP
#define HAWKES_TESTS_ORACLES_HPP

// Reference computations kept independent of the library's numerics.

#include <cmath>
#include <cstddef>

namespace oracle {

// Composite Simpson with a fixed even number of panels.
template <typename F> double simpson(F &&f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Root of an increasing function on [lo, hi] by plain bisection.
template <typename F> double root(F &&g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace oracle

#endif
