#pragma once

#include <string>
#include <vector>

namespace dirackit {

struct CheckResult {
  std::string name;
  bool passed;
  std::string witness;  // empty when passed
};

/// Pass/fail list for validators; failures carry a witness describing the
/// first violating tuple.
struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  void add(std::string name, bool passed, std::string witness = "");
};

}  // namespace dirackit
