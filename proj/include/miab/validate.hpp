#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace miab::cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const;
};

/// Suites: frame, channel, mobility, olla. Unknown names throw.
SuiteReport run_suite(std::string_view suite, std::uint64_t seed = 1);
const std::vector<std::string>& suite_names();

/// One "suite=<s> check=<c> result=PASS|FAIL detail=<d>" line per check.
void print_report(std::ostream& os, const SuiteReport& report);

// Building blocks shared with the acceptance test.
struct TurnCounts {
  std::int64_t events = 0;
  std::int64_t straight = 0, left = 0, right = 0;
};
/// Intersection events with all three turns available, from buses driven
/// on the not-limited grid until `min_events` have been seen.
TurnCounts count_turns(std::int64_t min_events, std::uint64_t seed);

struct OracleDiff {
  double max_path_loss_diff_db = 0.0;
  double max_los_diff = 0.0;
  int geometries = 0;
};
/// Compares the channel module with the standalone oracle at random valid
/// geometries of every class.
OracleDiff compare_channel_oracle(int geometries, std::uint64_t seed);

}  // namespace miab::cli
