#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace affsteer {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;   // worst value over all trials
  double tolerance = 0.0;  // pass iff measured <= tolerance
};

// Runs every closed-form / brute-force oracle `trials` times with seeds
// derived from `seed`.
std::vector<CheckResult> run_oracle_checks(std::uint64_t seed, int trials);

}  // namespace affsteer
