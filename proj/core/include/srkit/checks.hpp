#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace srkit {

/// Outcome of one invariant check, recorded verbatim in reports.
struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

using CheckList = std::vector<Check>;

inline bool all_passed(const CheckList& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

}  // namespace srkit
