#include "hawkes/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "hawkes/error.hpp"

namespace hawkes::numerics {

namespace {

// Kronrod 15-point nodes (positive half) and weights; Gauss 7-point weights
// on the odd Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel &o) const { return error < o.error; }
};

Panel gk15(const RealFn &f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    rk += kWgk[j] * fsum;
    if (j % 2 == 1) rg += kWg[j / 2] * fsum;
  }
  return Panel{a, b, rk * h, std::abs((rk - rg) * h)};
}

} // namespace

Quadrature integrate_gk(const RealFn &f, double a, double b, double abs_tol,
                        std::size_t max_intervals) {
  Quadrature q;
  if (!(b > a)) return q;
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  q.evaluations = 15;
  double total = first.value;
  double err = first.error;
  heap.push(first);
  while (err > abs_tol && heap.size() < max_intervals) {
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break; // interval exhausted
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    q.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed drift from the incremental updates.
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  q.value = v;
  q.error = e;
  return q;
}

namespace {

double simpson_rec(const RealFn &f, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth,
                   std::size_t &evals, double &err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  evals += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol || !(lm > a && rm < b)) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals,
                     err) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals,
                     err);
}

} // namespace

Quadrature integrate_simpson(const RealFn &f, double a, double b,
                             double abs_tol, int max_depth) {
  Quadrature q;
  if (!(b > a)) return q;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  q.evaluations = 3;
  // A minimum of two levels avoids accepting a lucky coarse estimate.
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  q.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = 0.0;
  q.value = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * abs_tol,
                        max_depth - 1, q.evaluations, err) +
            simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * abs_tol,
                        max_depth - 1, q.evaluations, err);
  q.error = err;
  return q;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

MonotoneRoot invert_concave_cumulative(
    const std::function<double(double)> &rate,
    const std::function<double(double, double)> &increment, double target,
    double tol, double time_cap) {
  MonotoneRoot r;
  if (!(target > 0.0)) return r;
  double t = 0.0;
  double acc = 0.0; // F(t)
  double lam = rate(0.0);
  if (!(lam > 0.0) || !std::isfinite(lam)) {
    std::ostringstream os;
    os << "intensity must be positive and finite, got " << lam;
    throw DomainError(os.str());
  }
  // Upper bracket, set once a step overshoots (only possible through
  // quadrature error or a rate that is not non-increasing).
  double hi = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 1; it <= 400; ++it) {
    r.iterations = it;
    const double gap = target - acc;
    if (gap <= tol) {
      converged = true;
      break;
    }
    double next = t + gap / lam;
    if (!(next < hi)) next = 0.5 * (t + hi);
    if (!(next > t)) { // step below machine resolution of t
      converged = true;
      break;
    }
    if (next > time_cap) {
      std::ostringstream os;
      os << "cumulative intensity did not reach " << target
         << " before time cap " << time_cap;
      throw UnboundedSearchError(os.str());
    }
    const double inc = increment(t, next);
    if (acc + inc > target + tol) {
      hi = next;
      continue;
    }
    t = next;
    acc += inc;
    lam = rate(t);
  }
  if (!converged) {
    std::ostringstream os;
    os << "inversion did not converge: residual " << (target - acc);
    throw UnboundedSearchError(os.str());
  }
  // First-order polish of the sub-tolerance residual.
  const double polished = t + (target - acc) / lam;
  if (polished >= t && polished < hi) t = polished;
  r.t = t;
  r.residual = acc - target;
  return r;
}

double bisect(const RealFn &g, double lo, double hi, double x_tol,
              double g_tol, int max_iter) {
  for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double v = g(mid);
    if (std::abs(v) <= g_tol) return mid;
    if (v < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace hawkes::numerics
