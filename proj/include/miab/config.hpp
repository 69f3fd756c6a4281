#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "miab/frame.hpp"
#include "miab/radio.hpp"
#include "miab/scenario.hpp"

namespace miab::sim {

/// Run configuration. Text form is "key = value" per line with '#'
/// comments; see to_text() for the full key list.
struct SimConfig {
  scenario::Regime regime = scenario::Regime::NotLimited;
  scenario::Deployment deployment = scenario::Deployment::OnlyMacros;
  std::string frame_pattern;  // built-in name; empty picks the deployment default
  std::string pattern_file;   // overrides frame_pattern when set
  double duration_ms = 2000.0;
  std::uint64_t seed = 1;
  bool fading = true;
  bool ul_flows = true;

  scenario::PopulationCounts counts;
  scenario::SitePlan sites;

  std::string mcs_table;  // path; empty uses the shipped table
  double hysteresis_db = 3.0;
  int topology_refresh_slots = 100;
  int channel_refresh_slots = 100;
  double channel_refresh_distance_m = 0.5;
  int fading_block_slots = 40;
  radio::OllaParams olla;

  // Execution knobs; they never change results and stay out of the hash.
  bool parallel = false;
  bool record_deliveries = false;

  SlotIndex num_slots() const;
  std::string pattern_name() const;
};

SimConfig parse_config(std::string_view text, SimConfig base = {});
SimConfig load_config(const std::string& path, SimConfig base = {});
/// Applies one "key = value" setting.
void set_option(SimConfig& cfg, std::string_view key, std::string_view value);

/// Canonical text of every result-affecting setting.
std::string to_text(const SimConfig& cfg);
std::uint64_t config_hash(const SimConfig& cfg);

frame::FramePattern resolve_pattern(const SimConfig& cfg);
/// Throws ConfigError on inconsistent settings.
void validate(const SimConfig& cfg);

}  // namespace miab::sim
