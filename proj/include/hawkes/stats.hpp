#ifndef HAWKES_STATS_HPP
#define HAWKES_STATS_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace hawkes::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t n2 = 0; // second sample size for two-sample tests
};

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
};

// P(K > lambda) for the Kolmogorov limit distribution.
double kolmogorov_sf(double lambda);

// D = sup |F_n - F| with asymptotic p-value Q(sqrt(n) D). Needs n >= 10.
TestResult ks_one_sample(std::vector<double> sample,
                         const std::function<double(double)> &cdf);

// Two-sample D with p-value Q(sqrt(n m / (n + m)) D).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Index of dispersion var/mean of window counts; p-value is two-sided from
// (n - 1) * dispersion ~ chi-square(n - 1). Needs >= 30 windows.
TestResult poisson_dispersion(const std::vector<double> &counts);

// Normal-approximation confidence interval; level in (0, 1).
MeanCi mean_ci(const std::vector<double> &sample, double level = 0.95);

double mean(const std::vector<double> &sample);
// Unbiased sample variance.
double variance(const std::vector<double> &sample);
double standard_error(const std::vector<double> &sample);
double lag1_autocorrelation(const std::vector<double> &sample);

// Wasserstein-1 distance between two empirical distributions.
double wasserstein1(std::vector<double> a, std::vector<double> b);

// Linear-interpolation quantiles (Hyndman-Fan type 7) of a sample.
std::vector<double> quantiles(std::vector<double> sample,
                              const std::vector<double> &probs);

std::function<double(double)> exponential_cdf(double rate);

} // namespace hawkes::stats

#endif // HAWKES_STATS_HPP
