#include "miab/experiment.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <stdexcept>

#include "miab/simcore.hpp"

namespace miab::cli {

namespace fs = std::filesystem;
using scenario::Deployment;
using scenario::Regime;

std::string Arm::label() const {
  return std::string(scenario::deployment_name(deployment)) + "_" + pattern;
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.seeds < 1) throw ConfigError("seeds must be >= 1");
  if (!(plan.duration_ms > 0)) throw ConfigError("duration_ms must be positive");
  if (plan.arms.empty()) throw ConfigError("experiment has no arms");
  for (const auto& a : plan.arms) {
    bool custom = !plan.base.pattern_file.empty() && a.pattern == plan.base.pattern_file;
    bool ok = custom || (a.deployment == Deployment::Miab
                             ? (a.pattern == "no_silence" || a.pattern == "with_silence")
                             : a.pattern == "macro_only");
    if (!ok)
      throw ConfigError("invalid arm: " + std::string(scenario::deployment_name(a.deployment)) +
                        " with pattern '" + a.pattern + "'");
  }
}

ExperimentPlan standard_plan(int seeds, double duration_ms) {
  ExperimentPlan plan;
  plan.seeds = seeds;
  plan.duration_ms = duration_ms;
  for (auto r : {Regime::NotLimited, Regime::Limited}) {
    plan.arms.push_back({r, Deployment::OnlyMacros, "macro_only"});
    plan.arms.push_back({r, Deployment::MacrosPicos, "macro_only"});
    plan.arms.push_back({r, Deployment::Miab, "no_silence"});
    plan.arms.push_back({r, Deployment::Miab, "with_silence"});
  }
  return plan;
}

sim::SimConfig arm_config(const ExperimentPlan& plan, const Arm& arm, int seed_index) {
  auto cfg = plan.base;
  cfg.regime = arm.regime;
  cfg.deployment = arm.deployment;
  if (arm.pattern != cfg.pattern_file) {
    cfg.frame_pattern = arm.pattern;
    cfg.pattern_file.clear();
  }
  cfg.duration_ms = plan.duration_ms;
  cfg.seed = plan.first_seed + static_cast<std::uint64_t>(seed_index);
  cfg.parallel = false;
  return cfg;
}

fs::path seed_dir(const fs::path& root, const Arm& arm, int seed_index) {
  return root / std::string(scenario::regime_name(arm.regime)) / arm.label() /
         ("seed_" + std::to_string(seed_index + 1));
}

std::vector<ArmResult> run_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);
  const int n_arms = static_cast<int>(plan.arms.size());
  const int n_tasks = n_arms * plan.seeds;
  for (const auto& a : plan.arms) sim::validate(arm_config(plan, a, 0));

  std::vector<ArmResult> results(plan.arms.size());
  for (int a = 0; a < n_arms; ++a) {
    results[a].arm = plan.arms[a];
    results[a].bundles.resize(static_cast<std::size_t>(plan.seeds));
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_tasks));

#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < n_tasks; ++t) {
    const int a = t / plan.seeds, s = t % plan.seeds;
    try {
      auto bundle = sim::run(arm_config(plan, plan.arms[a], s));
      if (!plan.out.empty()) metrics::export_bundle(bundle, seed_dir(plan.out, plan.arms[a], s));
      results[a].bundles[s] = std::move(bundle);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (!plan.out.empty()) write_comparison(plan.out / "comparison.csv", results);
  return results;
}

void write_comparison(const fs::path& file, const std::vector<ArmResult>& results) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << "regime,deployment,pattern,class,seeds,median_throughput_bps,frac_above_3_2_mbps,"
        "p90_latency_ms,frac_ues_p90_below_50ms,delivered_fraction,generated_bits,delivered_bits\n";
  char buf[256];
  for (const auto& r : results) {
    for (auto c : {metrics::UeClass::Passenger, metrics::UeClass::Pedestrian}) {
      auto s = metrics::summarize(r.bundles, c);
      std::snprintf(buf, sizeof buf, "%.6g,%.6f,%.6g,%.6f,%.6f,%lld,%lld", s.median_throughput_bps,
                    s.frac_above_3_2_mbps, s.p90_latency_ms, s.frac_ues_p90_below_50ms,
                    s.delivered_fraction, static_cast<long long>(s.generated_bits),
                    static_cast<long long>(s.delivered_bits));
      os << scenario::regime_name(r.arm.regime) << ',' << scenario::deployment_name(r.arm.deployment)
         << ',' << r.arm.pattern << ',' << metrics::class_name(c) << ',' << r.bundles.size() << ','
         << buf << '\n';
    }
  }
}

}  // namespace miab::cli
