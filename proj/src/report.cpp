#include "dirackit/report.hpp"

#include <utility>

namespace dirackit {

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void ValidationReport::add(std::string name, bool passed, std::string witness) {
  checks.push_back({std::move(name), passed, std::move(witness)});
}

}  // namespace dirackit
