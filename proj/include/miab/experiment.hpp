#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "miab/config.hpp"
#include "miab/metrics.hpp"

namespace miab::cli {

struct Arm {
  scenario::Regime regime = scenario::Regime::NotLimited;
  scenario::Deployment deployment = scenario::Deployment::OnlyMacros;
  std::string pattern;

  /// "<deployment>_<pattern>", used as a directory name.
  std::string label() const;
  friend bool operator==(const Arm&, const Arm&) = default;
};

struct ExperimentPlan {
  std::vector<Arm> arms;
  int seeds = 10;
  std::uint64_t first_seed = 1;
  double duration_ms = 2000.0;
  std::filesystem::path out;  // empty: nothing written
  sim::SimConfig base;        // everything else
};

/// macro_only for fixed deployments; no_silence or with_silence for miab.
/// Throws ConfigError naming the first bad arm.
void validate_plan(const ExperimentPlan& plan);

/// Both regimes x {only_macros, macros_picos, miab no_silence, miab with_silence}.
ExperimentPlan standard_plan(int seeds = 10, double duration_ms = 2000.0);

sim::SimConfig arm_config(const ExperimentPlan& plan, const Arm& arm, int seed_index);
std::filesystem::path seed_dir(const std::filesystem::path& root, const Arm& arm, int seed_index);

struct ArmResult {
  Arm arm;
  std::vector<metrics::MetricsBundle> bundles;  // one per seed, in seed order
};

/// Runs every (arm, seed) task, in parallel across tasks. With an output
/// root, writes one export per task under
/// <out>/<regime>/<label>/seed_<k>/ and a comparison.csv at the root.
std::vector<ArmResult> run_experiment(const ExperimentPlan& plan);

void write_comparison(const std::filesystem::path& file, const std::vector<ArmResult>& results);

}  // namespace miab::cli
