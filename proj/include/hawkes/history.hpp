#ifndef HAWKES_HISTORY_HPP
#define HAWKES_HISTORY_HPP

#include <cstddef>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

// Element of the sequence space: finite stored gaps x_1, x_2, ... (x_1 is
// the distance from 0 to the nearest past point) followed either by an
// all-infinite tail (tail_infinite) or by unknown coordinates (a truncated
// prefix of an infinite past).
class InterArrivalState {
public:
  // Empty state: only the point at 0.
  InterArrivalState() = default;
  // gaps given most recent first.
  explicit InterArrivalState(std::vector<double> gaps,
                             bool tail_infinite = true);

  static InterArrivalState from_chronological(std::vector<double> oldest_first,
                                              bool tail_infinite = true);

  std::size_t size() const noexcept { return rev_.size(); }
  bool is_empty() const noexcept { return rev_.empty() && tail_infinite_; }
  bool tail_infinite() const noexcept { return tail_infinite_; }
  // x_k for k >= 1; +inf beyond the stored gaps.
  double gap(std::size_t k) const noexcept;
  // Most recent first.
  std::vector<double> gaps() const;
  // Oldest first (internal storage order).
  const std::vector<double> &chronological() const noexcept { return rev_; }

  bool operator==(const InterArrivalState &o) const = default;

private:
  std::vector<double> rev_;
  bool tail_infinite_ = true;
};

// t_0 = 0 > t_1 > t_2 > ...
struct PointMeasure {
  std::vector<double> points;
};

struct ExcitationSum {
  double value = 0.0;
  double truncation_bound = 0.0;
};

inline constexpr double kDefaultDivergenceCap = 1e8;

// S(t, x) = h(t) + sum_k h(t + x_1 + ... + x_k). Terms are skipped once the
// remaining stored terms are provably below eps_tail in total (eps_tail = 0
// sums every stored term). When the state is a truncated prefix the bound
// on unseen coordinates is infinite unless the kernel has finite support
// already passed. Throws DivergenceError if the sum exceeds divergence_cap.
ExcitationSum excitation_sum(const InterArrivalState &x, double t,
                             const MemoryKernel &kernel, double eps_tail = 0.0,
                             double divergence_cap = kDefaultDivergenceCap);

// Same sum over a raw chronological (oldest first) gap array: the most
// recent stored gap is chron[n - 1].
ExcitationSum excitation_sum_span(const double *chron, std::size_t n,
                                  bool tail_infinite, double t,
                                  const MemoryKernel &kernel, double eps_tail,
                                  double divergence_cap);

// Partial sum of d(x, y) = sum_k 2^-k min(|x_k - y_k|, 1) up to k_max.
double seq_distance(const InterArrivalState &x, const InterArrivalState &y,
                    std::size_t k_max);

PointMeasure to_point_measure(const InterArrivalState &x);
InterArrivalState from_point_measure(const PointMeasure &m);

InterArrivalState prepend_gap(const InterArrivalState &x, double g);

} // namespace hawkes

#endif // HAWKES_HISTORY_HPP
