// Validation suites: domain closure, Lipschitz / growth sampling against the
// certified constants, pairwise conservation, metric axioms, reproducibility.
#pragma once

#include <string>
#include <vector>

#include "kinmc/model.hpp"

namespace kinmc {

enum class Depth { Quick, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  double margin = 0;  // worst observed slack (positive is healthy)
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Runs every suite that applies to each model. Failures are report entries,
// not exceptions.
ValidationReport validate(const std::vector<ModelSpec>& models, Depth depth,
                          std::uint64_t seed = 0x5EEDULL);

}  // namespace kinmc
