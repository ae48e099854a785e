#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cp1 {

/// Outcome of a verification run: named checks, violation messages and
/// scalar values, in insertion order.
struct Report {
  struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
  };
  std::vector<Check> checks;
  std::vector<std::string> violations;
  std::vector<std::pair<std::string, double>> values;

  void check(std::string name, bool passed, std::string detail = {}) {
    if (!passed) violations.push_back(name + (detail.empty() ? "" : ": " + detail));
    checks.push_back({std::move(name), passed, std::move(detail)});
  }
  void value(std::string name, double v) { values.emplace_back(std::move(name), v); }
  bool ok() const { return violations.empty(); }

  void append(const Report& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    values.insert(values.end(), o.values.begin(), o.values.end());
  }
};

}  // namespace cp1
