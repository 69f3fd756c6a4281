#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "miab/experiment.hpp"
#include "miab/simcore.hpp"
#include "miab/validate.hpp"

using namespace miab;
using namespace miab::cli;
using scenario::Deployment;
using scenario::Regime;

TEST_CASE("default plan has eight valid arms") {
  auto plan = standard_plan();
  CHECK(plan.arms.size() == 8);
  CHECK(plan.seeds == 10);
  CHECK(plan.duration_ms == 2000.0);
  CHECK_NOTHROW(validate_plan(plan));
  std::set<std::string> dirs;
  for (const auto& a : plan.arms) dirs.insert(seed_dir("out", a, 0).string());
  CHECK(dirs.size() == 8);
}

TEST_CASE("arm rules") {
  ExperimentPlan plan;
  plan.arms = {{Regime::NotLimited, Deployment::MacrosPicos, "with_silence"}};
  CHECK_THROWS_AS(validate_plan(plan), ConfigError);
  plan.arms = {{Regime::Limited, Deployment::Miab, "macro_only"}};
  CHECK_THROWS_AS(validate_plan(plan), ConfigError);
  plan.arms = {{Regime::Limited, Deployment::OnlyMacros, "macro_only"}};
  plan.seeds = 0;
  CHECK_THROWS_AS(validate_plan(plan), ConfigError);

  sim::SimConfig bad;
  bad.deployment = Deployment::OnlyMacros;
  bad.frame_pattern = "no_silence";
  CHECK_THROWS_AS(sim::validate(bad), ConfigError);
}

TEST_CASE("output layout is a pure function of the plan") {
  Arm a{Regime::Limited, Deployment::Miab, "with_silence"};
  CHECK(seed_dir("/r", a, 2) == std::filesystem::path("/r/limited/miab_with_silence/seed_3"));
  CHECK(seed_dir("/r", a, 2) == seed_dir("/r", a, 2));
  auto plan = standard_plan(3, 100.0);
  plan.first_seed = 7;
  CHECK(arm_config(plan, plan.arms[3], 2).seed == 9);
  CHECK(arm_config(plan, plan.arms[3], 2).frame_pattern == "with_silence");
}

TEST_CASE("small experiment writes per-seed exports and a comparison") {
  ExperimentPlan plan;
  plan.arms = {{Regime::Limited, Deployment::OnlyMacros, "macro_only"},
               {Regime::Limited, Deployment::Miab, "no_silence"}};
  plan.seeds = 2;
  plan.duration_ms = 50.0;
  plan.out = std::filesystem::temp_directory_path() / "miab_plan_test";
  std::filesystem::remove_all(plan.out);
  auto res = run_experiment(plan);
  REQUIRE(res.size() == 2);
  for (const auto& r : res) {
    CHECK(r.bundles.size() == 2);
    for (int k = 0; k < 2; ++k) {
      CHECK(r.bundles[static_cast<std::size_t>(k)].seed == plan.first_seed + static_cast<std::uint64_t>(k));
      CHECK(std::filesystem::exists(seed_dir(plan.out, r.arm, k) / "summary.txt"));
    }
  }
  CHECK(std::filesystem::exists(plan.out / "comparison.csv"));
  // the same plan run again gives the same bundles
  plan.out.clear();
  auto again = run_experiment(plan);
  for (std::size_t i = 0; i < res.size(); ++i)
    for (std::size_t k = 0; k < 2; ++k)
      CHECK(res[i].bundles[k].delivered_bits(metrics::UeClass::Pedestrian) ==
            again[i].bundles[k].delivered_bits(metrics::UeClass::Pedestrian));
  std::filesystem::remove_all(std::filesystem::temp_directory_path() / "miab_plan_test");
}

TEST_CASE("validation suites pass") {
  for (const auto& s : suite_names()) {
    auto r = run_suite(s);
    std::ostringstream os;
    print_report(os, r);
    CAPTURE(os.str());
    CHECK(r.pass());
    CHECK(os.str().find("result=FAIL") == std::string::npos);
  }
  CHECK_THROWS(run_suite("nope"));
}

TEST_CASE("config text round trip") {
  sim::SimConfig c;
  c.regime = Regime::Limited;
  c.deployment = Deployment::Miab;
  c.frame_pattern = "with_silence";
  c.seed = 42;
  c.hysteresis_db = 2.5;
  c.sites.pico_ring_radius_limited_m = 55.0;
  auto back = sim::parse_config(sim::to_text(c));
  CHECK(sim::to_text(back) == sim::to_text(c));
  CHECK(sim::config_hash(back) == sim::config_hash(c));

  auto p = c;
  p.parallel = true;
  CHECK(sim::config_hash(p) == sim::config_hash(c));
  p.seed = 43;
  CHECK(sim::config_hash(p) != sim::config_hash(c));

  CHECK_THROWS_AS(sim::parse_config("no_such_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(sim::parse_config("seed = abc\n"), ConfigError);
  auto parsed = sim::parse_config("# comment\nregime = limited\n\nduration_ms = 250 # inline\n");
  CHECK(parsed.regime == Regime::Limited);
  CHECK(parsed.num_slots() == 1000);
}
