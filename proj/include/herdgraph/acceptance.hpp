#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace herdgraph {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  int workers = 4;
  std::vector<int> only;  // empty runs every criterion
};

/// Runs the acceptance criteria in id order. Never throws; an exception inside
/// a check fails that check with the message as detail.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts);

/// "PASS  3 feature-oracle (0.12 s): detail"
std::string format_check(const CheckResult& r);

}  // namespace herdgraph
