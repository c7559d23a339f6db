#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "hawkes/error.hpp"
#include "hawkes/numerics.hpp"

namespace hawkes::stats {

namespace {

void sort_checked(std::vector<double> &v, std::size_t min_n, const char *what) {
  if (v.size() < min_n) {
    throw DomainError(std::string(what) + ": sample too small");
  }
  for (double x : v)
    if (std::isnan(x)) throw DomainError(std::string(what) + ": NaN in sample");
  std::sort(v.begin(), v.end());
}

} // namespace

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form of the CDF, fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double c = -pi2 / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double term = std::exp(c * (2 * k - 1) * (2 * k - 1));
      cdf += term;
      if (term < 1e-18) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sf = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sf += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sf, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> sample,
                         const std::function<double(double)> &cdf) {
  sort_checked(sample, 10, "ks_one_sample");
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f,
                  f - static_cast<double>(i) / n});
  }
  return TestResult{d, kolmogorov_sf(std::sqrt(n) * d), sample.size(), 0};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  sort_checked(a, 10, "ks_two_sample");
  sort_checked(b, 10, "ks_two_sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return TestResult{d, kolmogorov_sf(std::sqrt(ne) * d), a.size(), b.size()};
}

TestResult poisson_dispersion(const std::vector<double> &counts) {
  if (counts.size() < 30)
    throw DomainError("poisson_dispersion needs at least 30 windows");
  const double m = mean(counts);
  if (!(m > 0.0)) throw DomainError("poisson_dispersion: zero mean count");
  const double disp = variance(counts) / m;
  const double dof = static_cast<double>(counts.size() - 1);
  const boost::math::chi_squared chi(dof);
  const double x = dof * disp;
  const double lower = boost::math::cdf(chi, x);
  const double upper = boost::math::cdf(boost::math::complement(chi, x));
  const double p = std::min(1.0, 2.0 * std::min(lower, upper));
  return TestResult{disp, p, counts.size(), 0};
}

MeanCi mean_ci(const std::vector<double> &sample, double level) {
  if (sample.size() < 2) throw DomainError("mean_ci needs n >= 2");
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("mean_ci level must lie in (0, 1)");
  const boost::math::normal z;
  const double q = boost::math::quantile(z, 0.5 * (1.0 + level));
  return MeanCi{mean(sample), q * standard_error(sample)};
}

double mean(const std::vector<double> &sample) {
  if (sample.empty()) throw DomainError("mean of empty sample");
  numerics::CompensatedSum s;
  for (double x : sample) s.add(x);
  return s.value() / static_cast<double>(sample.size());
}

double variance(const std::vector<double> &sample) {
  if (sample.size() < 2) throw DomainError("variance needs n >= 2");
  const double m = mean(sample);
  numerics::CompensatedSum s;
  for (double x : sample) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(sample.size() - 1);
}

double standard_error(const std::vector<double> &sample) {
  return std::sqrt(variance(sample) / static_cast<double>(sample.size()));
}

double lag1_autocorrelation(const std::vector<double> &sample) {
  if (sample.size() < 3) throw DomainError("autocorrelation needs n >= 3");
  const double m = mean(sample);
  numerics::CompensatedSum num, den;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double c = sample[i] - m;
    den.add(c * c);
    if (i + 1 < sample.size()) num.add(c * (sample[i + 1] - m));
  }
  if (den.value() == 0.0) return 0.0;
  return num.value() / den.value();
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  sort_checked(a, 1, "wasserstein1");
  sort_checked(b, 1, "wasserstein1");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  // Integrate |F_a - F_b| over the merged support.
  std::size_t i = 0, j = 0;
  double prev = std::min(a.front(), b.front());
  double w = 0.0;
  while (i < a.size() || j < b.size()) {
    const double x = j >= b.size() || (i < a.size() && a[i] <= b[j]) ? a[i]
                                                                      : b[j];
    w += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) *
         (x - prev);
    prev = x;
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
  }
  return w;
}

std::vector<double> quantiles(std::vector<double> sample,
                              const std::vector<double> &probs) {
  sort_checked(sample, 1, "quantiles");
  std::vector<double> out;
  out.reserve(probs.size());
  const double last = static_cast<double>(sample.size() - 1);
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level outside [0,1]");
    const double h = p * last;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    const double w = h - static_cast<double>(lo);
    if (w == 0.0 || sample[lo] == sample[hi])
      out.push_back(sample[lo]);
    else
      out.push_back(sample[lo] + w * (sample[hi] - sample[lo]));
  }
  return out;
}

std::function<double(double)> exponential_cdf(double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential rate must be > 0");
  return [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
}

} // namespace hawkes::stats
