#pragma once

#include <string>
#include <vector>

namespace msfq::validate {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // worst observed value vs bound
};

// Runs the cross-module invariant battery (round trips, identities,
// monotonicity, oracle agreement). Deterministic: fixed seeds.
std::vector<CheckResult> run_battery();

}  // namespace msfq::validate
