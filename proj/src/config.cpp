#include "miab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace miab::sim {

SlotIndex SimConfig::num_slots() const {
  return static_cast<SlotIndex>(std::llround(duration_ms / kSlotMs));
}

std::string SimConfig::pattern_name() const {
  if (!pattern_file.empty()) return pattern_file;
  if (!frame_pattern.empty()) return frame_pattern;
  return deployment == scenario::Deployment::Miab ? "no_silence" : "macro_only";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

std::int64_t to_int(std::string_view key, std::string_view v) {
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for '" + std::string(key) + "': '" + std::string(v) + "'");
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void set_option(SimConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  const std::string k(key);
  if (k == "regime") c.regime = scenario::parse_regime(value);
  else if (k == "deployment") c.deployment = scenario::parse_deployment(value);
  else if (k == "frame_pattern") c.frame_pattern = std::string(value);
  else if (k == "pattern_file") c.pattern_file = std::string(value);
  else if (k == "duration_ms") c.duration_ms = to_double(key, value);
  else if (k == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (k == "fading") c.fading = to_bool(key, value);
  else if (k == "ul_flows") c.ul_flows = to_bool(key, value);
  else if (k == "buses") c.counts.buses = static_cast<int>(to_int(key, value));
  else if (k == "passengers") c.counts.passengers = static_cast<int>(to_int(key, value));
  else if (k == "pedestrians") c.counts.pedestrians = static_cast<int>(to_int(key, value));
  else if (k == "passengers_per_bus") c.counts.passengers_per_bus = static_cast<int>(to_int(key, value));
  else if (k == "macro_triangle_radius_m") c.sites.macro_triangle_radius_m = to_double(key, value);
  else if (k == "pico_ring_radius_not_limited_m") c.sites.pico_ring_radius_not_limited_m = to_double(key, value);
  else if (k == "pico_ring_radius_limited_m") c.sites.pico_ring_radius_limited_m = to_double(key, value);
  else if (k == "limited_macro_inset_m") c.sites.limited_macro_inset_m = to_double(key, value);
  else if (k == "pico_height_m") c.sites.pico_height_m = to_double(key, value);
  else if (k == "pico_tx_power_dbm") c.sites.pico_tx_power_dbm = to_double(key, value);
  else if (k == "mcs_table") c.mcs_table = std::string(value);
  else if (k == "hysteresis_db") c.hysteresis_db = to_double(key, value);
  else if (k == "topology_refresh_slots") c.topology_refresh_slots = static_cast<int>(to_int(key, value));
  else if (k == "channel_refresh_slots") c.channel_refresh_slots = static_cast<int>(to_int(key, value));
  else if (k == "channel_refresh_distance_m") c.channel_refresh_distance_m = to_double(key, value);
  else if (k == "fading_block_slots") c.fading_block_slots = static_cast<int>(to_int(key, value));
  else if (k == "olla_step_down_db") c.olla.step_down_db = to_double(key, value);
  else if (k == "olla_step_up_db") c.olla.step_up_db = to_double(key, value);
  else if (k == "olla_min_offset_db") c.olla.min_offset_db = to_double(key, value);
  else if (k == "olla_max_offset_db") c.olla.max_offset_db = to_double(key, value);
  else if (k == "parallel") c.parallel = to_bool(key, value);
  else if (k == "record_deliveries") c.record_deliveries = to_bool(key, value);
  else throw ConfigError("unknown config key '" + k + "'");
}

SimConfig parse_config(std::string_view text, SimConfig c) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    set_option(c, body.substr(0, eq), body.substr(eq + 1));
  }
  return c;
}

SimConfig load_config(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string to_text(const SimConfig& c) {
  std::ostringstream os;
  os << "regime = " << scenario::regime_name(c.regime) << '\n'
     << "deployment = " << scenario::deployment_name(c.deployment) << '\n'
     << "frame_pattern = " << c.pattern_name() << '\n'
     << "duration_ms = " << num(c.duration_ms) << '\n'
     << "seed = " << c.seed << '\n'
     << "fading = " << (c.fading ? "true" : "false") << '\n'
     << "ul_flows = " << (c.ul_flows ? "true" : "false") << '\n'
     << "buses = " << c.counts.buses << '\n'
     << "passengers = " << c.counts.passengers << '\n'
     << "pedestrians = " << c.counts.pedestrians << '\n'
     << "passengers_per_bus = " << c.counts.passengers_per_bus << '\n'
     << "macro_triangle_radius_m = " << num(c.sites.macro_triangle_radius_m) << '\n'
     << "pico_ring_radius_not_limited_m = " << num(c.sites.pico_ring_radius_not_limited_m) << '\n'
     << "pico_ring_radius_limited_m = " << num(c.sites.pico_ring_radius_limited_m) << '\n'
     << "limited_macro_inset_m = " << num(c.sites.limited_macro_inset_m) << '\n'
     << "pico_height_m = " << num(c.sites.pico_height_m) << '\n'
     << "pico_tx_power_dbm = " << num(c.sites.pico_tx_power_dbm) << '\n'
     << "mcs_table = " << (c.mcs_table.empty() ? "builtin" : c.mcs_table) << '\n'
     << "hysteresis_db = " << num(c.hysteresis_db) << '\n'
     << "topology_refresh_slots = " << c.topology_refresh_slots << '\n'
     << "channel_refresh_slots = " << c.channel_refresh_slots << '\n'
     << "channel_refresh_distance_m = " << num(c.channel_refresh_distance_m) << '\n'
     << "fading_block_slots = " << c.fading_block_slots << '\n'
     << "olla_step_down_db = " << num(c.olla.step_down_db) << '\n'
     << "olla_step_up_db = " << num(c.olla.step_up_db) << '\n'
     << "olla_min_offset_db = " << num(c.olla.min_offset_db) << '\n'
     << "olla_max_offset_db = " << num(c.olla.max_offset_db) << '\n';
  return os.str();
}

std::uint64_t config_hash(const SimConfig& c) { return tag_hash(to_text(c)); }

frame::FramePattern resolve_pattern(const SimConfig& c) {
  if (!c.pattern_file.empty()) return frame::load_pattern_file(c.pattern_file);
  return frame::builtin_pattern(c.pattern_name());
}

void validate(const SimConfig& c) {
  if (!(c.duration_ms > 0)) throw ConfigError("duration_ms must be positive");
  if (c.topology_refresh_slots < 1) throw ConfigError("topology_refresh_slots must be >= 1");
  if (c.channel_refresh_slots < 1) throw ConfigError("channel_refresh_slots must be >= 1");
  if (c.fading_block_slots < 1) throw ConfigError("fading_block_slots must be >= 1");
  if (c.hysteresis_db < 0) throw ConfigError("hysteresis_db must be non-negative");
  if (c.olla.step_down_db <= 0 || c.olla.step_up_db <= 0 ||
      c.olla.min_offset_db > c.olla.max_offset_db)
    throw ConfigError("inconsistent OLLA parameters");
  if (c.counts.buses * c.counts.passengers_per_bus != c.counts.passengers)
    throw ConfigError("buses x passengers_per_bus must equal the passenger total");

  frame::FramePattern pattern;
  try {
    pattern = resolve_pattern(c);
  } catch (const frame::PatternNotFound& e) {
    throw ConfigError(e.what());
  } catch (const frame::InvalidPattern& e) {
    throw ConfigError(e.what());
  }
  const bool miab = c.deployment == scenario::Deployment::Miab;
  if (miab && !pattern.has_miab_rows())
    throw ConfigError("miab deployment needs a pattern with backhaul and mIAB access rows");
  if (!miab && pattern.has_miab_rows())
    throw ConfigError("frame pattern '" + c.pattern_name() + "' has mIAB rows but deployment is " +
                      std::string(scenario::deployment_name(c.deployment)));
  if (miab) {
    if (!frame::is_self_interference_free(pattern))
      throw ConfigError("frame pattern makes an mIAB node transmit and receive in the same slot");
    for (std::size_t t = 0; t < pattern.length(); ++t) {
      auto a = pattern.at(frame::Role::DonorAccess, static_cast<SlotIndex>(t));
      auto b = pattern.at(frame::Role::Backhaul, static_cast<SlotIndex>(t));
      if (frame::is_active(a) && frame::is_active(b) &&
          frame::is_downlink(a) != frame::is_downlink(b))
        throw ConfigError("donor access and backhaul rows disagree in slot " + std::to_string(t + 1));
    }
  }
  if (!c.mcs_table.empty()) radio::load_mcs_table(c.mcs_table);
}

}  // namespace miab::sim
