#include "hawkes/history.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hawkes/error.hpp"

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gap(double g) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    std::ostringstream os;
    os << "gap must be finite and > 0, got " << g;
    throw DomainError(os.str());
  }
}

} // namespace

InterArrivalState::InterArrivalState(std::vector<double> gaps,
                                     bool tail_infinite)
    : rev_(gaps.rbegin(), gaps.rend()), tail_infinite_(tail_infinite) {
  for (double g : rev_) check_gap(g);
}

InterArrivalState
InterArrivalState::from_chronological(std::vector<double> oldest_first,
                                      bool tail_infinite) {
  for (double g : oldest_first) check_gap(g);
  InterArrivalState s;
  s.rev_ = std::move(oldest_first);
  s.tail_infinite_ = tail_infinite;
  return s;
}

double InterArrivalState::gap(std::size_t k) const noexcept {
  if (k == 0 || k > rev_.size()) return kInf;
  return rev_[rev_.size() - k];
}

std::vector<double> InterArrivalState::gaps() const {
  return std::vector<double>(rev_.rbegin(), rev_.rend());
}

ExcitationSum excitation_sum(const InterArrivalState &x, double t,
                             const MemoryKernel &kernel, double eps_tail,
                             double divergence_cap) {
  const auto &chron = x.chronological();
  return excitation_sum_span(chron.data(), chron.size(), x.tail_infinite(), t,
                             kernel, eps_tail, divergence_cap);
}

ExcitationSum excitation_sum_span(const double *chron, std::size_t n,
                                  bool tail_infinite, double t,
                                  const MemoryKernel &kernel, double eps_tail,
                                  double divergence_cap) {
  if (std::isnan(t) || t < 0.0)
    throw DomainError("excitation sum evaluated at negative or NaN time");
  if (eps_tail < 0.0) throw DomainError("eps_tail must be >= 0");
  if (t == kInf) return {};
  const double support = kernel.support_end();
  ExcitationSum out;
  double value = kernel.eval(t);
  double offset = t;
  std::size_t k = 0;
  for (; k < n; ++k) {
    if (offset >= support) break;
    const double head = kernel.eval(offset);
    const double remaining = static_cast<double>(n - k) * head;
    if (eps_tail > 0.0 && remaining <= eps_tail) {
      out.truncation_bound = remaining;
      break;
    }
    offset += chron[n - 1 - k];
    value += kernel.eval(offset);
    if (value > divergence_cap) {
      std::ostringstream os;
      os << "excitation sum exceeds divergence cap " << divergence_cap;
      throw DivergenceError(os.str());
    }
  }
  if (!tail_infinite && offset < support) out.truncation_bound = kInf;
  out.value = value;
  return out;
}

double seq_distance(const InterArrivalState &x, const InterArrivalState &y,
                    std::size_t k_max) {
  if (k_max == 0) throw DomainError("seq_distance needs k_max >= 1");
  double d = 0.0;
  double w = 1.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    w *= 0.5;
    const double a = x.gap(k);
    const double b = y.gap(k);
    double term;
    if (std::isinf(a) && std::isinf(b))
      term = 0.0;
    else if (std::isinf(a) || std::isinf(b))
      term = 1.0;
    else
      term = std::min(std::abs(a - b), 1.0);
    d += w * term;
  }
  return d;
}

PointMeasure to_point_measure(const InterArrivalState &x) {
  PointMeasure m;
  m.points.reserve(x.size() + 1);
  m.points.push_back(0.0);
  double t = 0.0;
  for (std::size_t k = 1; k <= x.size(); ++k) {
    t -= x.gap(k);
    m.points.push_back(t);
  }
  return m;
}

InterArrivalState from_point_measure(const PointMeasure &m) {
  if (m.points.empty() || m.points.front() != 0.0)
    throw DomainError("point measure must start at 0");
  std::vector<double> gaps;
  gaps.reserve(m.points.size() - 1);
  for (std::size_t i = 1; i < m.points.size(); ++i) {
    if (!(m.points[i] < m.points[i - 1]))
      throw DomainError("point measure must be strictly decreasing");
    gaps.push_back(m.points[i - 1] - m.points[i]);
  }
  return InterArrivalState(std::move(gaps), true);
}

InterArrivalState prepend_gap(const InterArrivalState &x, double g) {
  check_gap(g);
  std::vector<double> chron = x.chronological();
  chron.push_back(g);
  return InterArrivalState::from_chronological(std::move(chron),
                                               x.tail_infinite());
}

} // namespace hawkes
