#ifndef CRITWAVE_VERIFY_HPP
#define CRITWAVE_VERIFY_HPP

// The acceptance suite: every criterion is pinned here, in code, with its
// stated tolerance. `fast` trims instance counts for a quick smoke run;
// `full` is the gate.

#include <functional>
#include <string>
#include <vector>

namespace critwave::verify {

enum class Level { fast, full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Report {
  std::vector<CriterionResult> results;
  bool all_pass = true;
};

// Runs the selected criteria (all when `only` is empty) and streams one
// pass/fail line per criterion to `sink`.
Report run_suite(Level level, const std::vector<int>& only = {},
                 const std::function<void(const std::string&)>& sink = {});

std::string format_line(const CriterionResult& r);

}  // namespace critwave::verify

#endif
