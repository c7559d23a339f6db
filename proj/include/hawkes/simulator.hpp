#ifndef HAWKES_SIMULATOR_HPP
#define HAWKES_SIMULATOR_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "hawkes/history.hpp"
#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

enum class PathStatus { kCompleted, kHorizonReached, kBlowUpSuspected };

const char *path_status_name(PathStatus s) noexcept;

struct PointPath {
  std::vector<double> gaps;   // X_1, X_2, ...
  std::vector<double> times;  // T_n = X_1 + ... + X_n
  std::vector<double> e_used; // E_n consumed by event n
  PathStatus status = PathStatus::kCompleted;

  std::size_t size() const noexcept { return gaps.size(); }
};

struct SimConfig {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t max_events = 1000;
  std::optional<double> horizon;
  double inversion_tol = 1e-10;
  double min_gap = 1e-12;
  double eps_tail = 0.0;
  double time_cap = 1e6;
};

// Intensity since the latest event, s -> Phi(S(s)), maintained incrementally
// as events are appended. Exponential kernels keep S(s) = A exp(-s / scale)
// with A updated by A <- 1 + A exp(-gap / scale); tabulated kernels keep the
// event offsets that still lie inside the kernel support.
class ChainStepper {
public:
  ChainStepper(const InterArrivalState &x0, const ModelParams &model,
               double tol = 1e-10, double time_cap = 1e6);

  double excitation(double s) const;
  double intensity(double s) const { return model_.activation(excitation(s)); }
  // integral_a^b intensity to absolute accuracy tol.
  double integrate(double a, double b, double tol) const;
  // Smallest t with integral_0^t intensity = e.
  double next_gap(double e) const;
  void advance(double gap);
  double step(double e) {
    const double g = next_gap(e);
    advance(g);
    return g;
  }

  const ModelParams &model() const noexcept { return model_; }
  double tol() const noexcept { return tol_; }

private:
  ModelParams model_;
  double tol_;
  double time_cap_;
  bool exponential_;
  double scale_ = 1.0;
  double amplitude_ = 1.0;     // exponential: S(0)
  std::deque<double> offsets_; // tabulated: ages of kept points, newest first
};

// Lambda(t) = integral_0^t Phi(S(s, x)) ds.
double cumulative_intensity(const InterArrivalState &x, double t,
                            const ModelParams &model, double tol = 1e-10);

// Solves Lambda(t) = e. Throws UnboundedSearchError past time_cap.
double next_gap_inverse(const InterArrivalState &x, double e,
                        const ModelParams &model, double tol = 1e-10,
                        double time_cap = 1e6);

// Same root, with S(s, x) re-evaluated from the stored gaps at every
// quadrature node (no incremental state). Terms are dropped once they are
// provably below eps_tail in total.
double next_gap_direct(const InterArrivalState &x, double e,
                       const ModelParams &model, double tol = 1e-10,
                       double eps_tail = 1e-15, double time_cap = 1e6);

// One transition of the kernel: draws E ~ Exp(1) and prepends the gap.
InterArrivalState kernel_step(const InterArrivalState &x, CounterRng &rng,
                              const ModelParams &model, double tol = 1e-10);
// Transition with an injected compensator increment.
InterArrivalState kernel_step_with(const InterArrivalState &x, double e,
                                   const ModelParams &model,
                                   double tol = 1e-10);

PointPath simulate(const InterArrivalState &x0, const ModelParams &model,
                   const SimConfig &cfg);

// Recomputes the compensator over each gap by adaptive Simpson on explicit
// history sums, independently of e_used. Throws IntegrityError when an
// increment differs from e_used by more than 10 tol.
std::vector<double> compensator_increments(const PointPath &path,
                                           const InterArrivalState &x0,
                                           const ModelParams &model,
                                           double tol = 1e-10,
                                           double eps_tail = 1e-15);

// Ogata thinning with the bound refreshed at each rejection; valid because
// the intensity is non-increasing between events.
double next_gap_thinning(const InterArrivalState &x, CounterRng &rng,
                         const ModelParams &model, double time_cap = 1e6);

struct RandomWalkCheck {
  bool holds = true;
  std::size_t violations = 0;
  std::size_t first_violation = 0; // 1-based event index, 0 if none
  double max_excess = -1e300;      // max over n of lhs - rhs - slack
};

// Checks, for every n along an empty-start path,
//   sum_{k<=n} (E_k - alpha beta0)
//     <= nu0 T_n - beta0 sum_{k=1}^n Hbar(X_k + ... + X_n),
// with (nu0, beta0) = affine_dominator(activation, margin). The slack
// allows n * 10 * tol for inversion residuals plus rounding.
RandomWalkCheck random_walk_bound_check(const PointPath &path,
                                        const ModelParams &model,
                                        double margin, double tol = 1e-10);

} // namespace hawkes

#endif // HAWKES_SIMULATOR_HPP
