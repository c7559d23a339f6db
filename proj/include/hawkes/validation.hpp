#ifndef HAWKES_VALIDATION_HPP
#define HAWKES_VALIDATION_HPP

#include <functional>
#include <string>
#include <vector>

namespace hawkes::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  // Reduced sample sizes for a fast smoke run; thresholds are unchanged.
  bool quick = false;
};

// Runs the acceptance criteria in order with fixed seeds, reporting each
// result as soon as it is available.
std::vector<CriterionResult>
run_all(const Options &opt,
        const std::function<void(const CriterionResult &)> &on_result = {});

std::string format_line(const CriterionResult &r);

} // namespace hawkes::validation

#endif // HAWKES_VALIDATION_HPP
