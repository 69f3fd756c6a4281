// Command-line front end: single runs, multi-seed batches, the standard plan,
// scene/channel dumps and validation suites.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "miab/experiment.hpp"
#include "miab/simcore.hpp"
#include "miab/validate.hpp"

namespace {

using namespace miab;

void dump_scene(const sim::Simulation& s, std::ostream& os) {
  os << "id,kind,x,y,z\n";
  char buf[96];
  for (const auto& n : s.scene().nodes) {
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f", n.position.x, n.position.y, n.position.z);
    os << n.id << ',' << scenario::kind_name(n.kind) << ',' << buf << '\n';
  }
}

void dump_channel(const sim::Simulation& s, SlotIndex slot, std::ostream& os) {
  const auto& links = s.links();
  const auto n = static_cast<NodeId>(links.num_nodes());
  char buf[160];
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      const auto& st = links.pair(a, b).state;
      std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.1f,%.4f", st.path_loss_db, st.shadowing_db,
                    st.penetration_db, st.total_loss_db());
      os << slot << ',' << a << ',' << b << ',' << channel::scenario_name(st.cls.scenario) << ','
         << (st.los ? 1 : 0) << ',' << buf << '\n';
    }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mIAB system-level simulator"};
  app.set_version_flag("--version", "miab_sim 1.0");

  std::string config_path, regime, deployment, pattern, out_dir, trace_path;
  std::string scene_path, channel_path;
  std::vector<std::string> suites;
  int seeds = 1, dump_every = 0;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  bool full = false, experiment = false, parallel = false;

  app.add_option("--config", config_path, "Run config file (key = value)")->check(CLI::ExistingFile);
  app.add_option("--regime", regime, "not_limited | limited");
  app.add_option("--deployment", deployment, "only_macros | macros_picos | miab");
  app.add_option("--pattern", pattern, "no_silence | with_silence | macro_only");
  app.add_option("--seeds", seeds, "Seeds per arm")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "First seed");
  app.add_option("--duration-ms", duration, "Simulated time per run")->check(CLI::PositiveNumber);
  app.add_flag("--full", full, "8000 ms runs");
  app.add_flag("--experiment", experiment, "Run all 8 arms of both regimes");
  app.add_option("--out", out_dir, "Output root for exports");
  app.add_option("--dump-scene", scene_path, "Write initial node positions as CSV ('-' for stdout)");
  app.add_option("--dump-channel", channel_path, "Write pair channel states as CSV ('-' for stdout)");
  app.add_option("--dump-every", dump_every, "Slots between channel dumps (0: slot 0 only)");
  app.add_option("--trace", trace_path, "Write a trajectory trace of one run");
  app.add_option("--validate", suites, "Validation suite: frame, channel, mobility, olla")
      ->check(CLI::IsMember(cli::suite_names()));
  app.add_flag("--parallel", parallel, "OpenMP inside a single run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!suites.empty()) {
      bool ok = true;
      for (const auto& s : suites) {
        auto r = cli::run_suite(s, seed.value_or(1));
        cli::print_report(std::cout, r);
        ok = ok && r.pass();
      }
      return ok ? 0 : 1;
    }

    sim::SimConfig cfg;
    if (!config_path.empty()) cfg = sim::load_config(config_path);
    if (!regime.empty()) sim::set_option(cfg, "regime", regime);
    if (!deployment.empty()) sim::set_option(cfg, "deployment", deployment);
    if (!pattern.empty()) sim::set_option(cfg, "frame_pattern", pattern);
    if (duration) cfg.duration_ms = *duration;
    if (full) cfg.duration_ms = 8000.0;
    if (seed) cfg.seed = *seed;
    cfg.parallel = parallel;
    sim::validate(cfg);

    if (!scene_path.empty() || !channel_path.empty() || !trace_path.empty()) {
      sim::Simulation s(cfg);
      std::ofstream trace_file;
      if (!trace_path.empty()) {
        trace_file = open_out(trace_path);
        s.set_trace(&trace_file);
      }
      if (!scene_path.empty()) {
        if (scene_path == "-") {
          dump_scene(s, std::cout);
        } else {
          auto f = open_out(scene_path);
          dump_scene(s, f);
        }
      }
      std::ofstream channel_file;
      std::ostream* ch = nullptr;
      if (!channel_path.empty()) {
        if (channel_path == "-") {
          ch = &std::cout;
        } else {
          channel_file = open_out(channel_path);
          ch = &channel_file;
        }
        *ch << "slot,node_a,node_b,class,los,pl_db,sh_db,pen_db,total_db\n";
      }
      const bool run_all = !trace_path.empty() || (ch && dump_every > 0);
      const SlotIndex end = run_all ? cfg.num_slots() : (ch ? 1 : 0);
      while (s.slot() < end) {
        SlotIndex t = s.slot();
        s.step();
        if (ch && (t == 0 || (dump_every > 0 && t % dump_every == 0))) dump_channel(s, t, *ch);
      }
      return 0;
    }

    cli::ExperimentPlan plan;
    if (experiment) {
      plan = cli::standard_plan(seeds, cfg.duration_ms);
    } else {
      plan.seeds = seeds;
      plan.duration_ms = cfg.duration_ms;
      plan.arms.push_back({cfg.regime, cfg.deployment, cfg.pattern_name()});
    }
    plan.base = cfg;
    plan.first_seed = cfg.seed;
    if (!out_dir.empty()) plan.out = out_dir;

    auto results = cli::run_experiment(plan);
    std::cout << "arm,class,median_throughput_mbps,frac_above_3_2_mbps,p90_latency_ms,delivered_fraction\n";
    for (const auto& r : results)
      for (auto c : {metrics::UeClass::Passenger, metrics::UeClass::Pedestrian}) {
        auto s = metrics::summarize(r.bundles, c);
        std::printf("%s/%s,%s,%.3f,%.3f,%.2f,%.4f\n",
                    std::string(scenario::regime_name(r.arm.regime)).c_str(), r.arm.label().c_str(),
                    std::string(metrics::class_name(c)).c_str(), s.median_throughput_bps / 1e6,
                    s.frac_above_3_2_mbps, s.p90_latency_ms, s.delivered_fraction);
      }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
