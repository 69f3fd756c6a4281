#include "miab/validate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "miab/channel.hpp"
#include "miab/frame.hpp"
#include "miab/mobility.hpp"
#include "miab/oracle.hpp"
#include "miab/radio.hpp"
#include "miab/scenario.hpp"

namespace miab::cli {

bool SuiteReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"frame", "channel", "mobility", "olla"};
  return names;
}

void print_report(std::ostream& os, const SuiteReport& r) {
  for (const auto& c : r.checks)
    os << "suite=" << r.suite << " check=" << c.name << " result=" << (c.pass ? "PASS" : "FAIL")
       << " detail=" << c.detail << '\n';
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

using frame::Fraction;
using frame::Role;
using frame::RoleUsage;
using frame::SlotDirection;

RoleUsage usage(std::int64_t dl, std::int64_t ul, std::int64_t len) {
  return {Fraction(dl, len), Fraction(ul, len), Fraction(dl + ul, len)};
}

// Case definitions restated from the directions each link must have.
frame::CaseStatus expected_case(frame::InterferenceCase c, SlotDirection donor, SlotDirection access) {
  using enum SlotDirection;
  if (donor == Silent || access == Silent) return frame::CaseStatus::AvoidedBySilence;
  const bool donor_dl = donor == Downlink || donor == SpecialDownlink;
  const bool access_dl = access == Downlink || access == SpecialDownlink;
  bool needs_donor_dl = c == frame::InterferenceCase::Case01 || c == frame::InterferenceCase::Case02;
  bool ok = needs_donor_dl ? (donor_dl && !access_dl) : (!donor_dl && access_dl);
  return ok ? frame::CaseStatus::Possible : frame::CaseStatus::AvoidedByAlignment;
}

SuiteReport frame_suite() {
  SuiteReport r{"frame", {}};
  const auto& no_sil = frame::builtin_pattern("no_silence");
  const auto& with_sil = frame::builtin_pattern("with_silence");
  const auto& macro = frame::builtin_pattern("macro_only");

  auto u1 = frame::compute_usage(no_sil);
  bool t1 = true;
  for (auto role : frame::kAllRoles) t1 = t1 && u1.at(role) == usage(1, 1, 2);
  r.checks.push_back({"no_silence_usage", t1, "all roles 1/2,1/2,1"});

  auto u2 = frame::compute_usage(with_sil);
  bool t2 = u2.at(Role::DonorAccess) == usage(4, 3, 10) && u2.at(Role::Backhaul) == usage(3, 3, 10) &&
            u2.at(Role::MiabAccess) == usage(4, 3, 10);
  r.checks.push_back({"with_silence_usage", t2, "40/30/70 30/30/60 40/30/70"});

  auto u4 = frame::compute_usage(macro);
  r.checks.push_back({"macro_only_usage", u4.at(Role::DonorAccess) == usage(5, 5, 10), "50/50/100"});

  r.checks.push_back({"no_silence_self_interference_free", frame::is_self_interference_free(no_sil), "no mode C/D"});
  r.checks.push_back({"with_silence_self_interference_free", frame::is_self_interference_free(with_sil), "no mode C/D"});

  using enum SlotDirection;
  const SlotDirection all[] = {Downlink, Uplink, SpecialDownlink, Silent};
  int mismatches = 0, triples = 0;
  for (auto d : all)
    for (auto b : all)
      for (auto a : all) {
        ++triples;
        frame::FramePattern p({d}, {b}, {a});
        auto got = frame::avoided_cases(p).front();
        for (std::size_t k = 0; k < frame::kAllCases.size(); ++k)
          if (got[k] != expected_case(frame::kAllCases[k], d, a)) ++mismatches;
      }
  r.checks.push_back({"cases_exhaustive", mismatches == 0 && triples == 64,
                      std::to_string(triples) + " triples, " + std::to_string(mismatches) + " mismatches"});
  return r;
}

SuiteReport channel_suite(std::uint64_t seed) {
  SuiteReport r{"channel", {}};
  auto diff = compare_channel_oracle(1000, seed);
  r.checks.push_back({"path_loss_oracle", diff.max_path_loss_diff_db <= 1e-9,
                      fmt("max_diff_db=%.3g over %g geometries", diff.max_path_loss_diff_db, diff.geometries)});
  r.checks.push_back({"los_probability_oracle", diff.max_los_diff <= 1e-12,
                      fmt("max_diff=%.3g over %g geometries", diff.max_los_diff, diff.geometries)});

  const auto& macro = scenario::node_spec(scenario::NodeKind::MacroGnb).antenna;
  auto flat = macro;
  flat.tilt_deg = 0.0;
  double boresight = channel::element_gain_db(flat, {1, 0, 0});
  double at_32 = flat.max_element_gain_dbi - channel::element_gain_db(flat, {std::cos(deg_to_rad(32.5)), std::sin(deg_to_rad(32.5)), 0});
  double at_65 = flat.max_element_gain_dbi - channel::element_gain_db(flat, {std::cos(deg_to_rad(65.0)), std::sin(deg_to_rad(65.0)), 0});
  double serving = channel::antenna_gain_db(flat, {1, 0, 0}, true);
  bool pat = std::abs(boresight - 8.0) < 1e-12 && std::abs(at_32 - 3.0) < 1e-12 &&
             std::abs(at_65 - 12.0) < 1e-12 && std::abs(serving - (8.0 + 10.0 * std::log10(64.0))) < 1e-12;
  r.checks.push_back({"element_pattern", pat,
                      fmt("boresight=%.4f att32.5=%.4f att65=%.4f", boresight, at_32, at_65)});
  return r;
}

SuiteReport mobility_suite(std::uint64_t seed) {
  SuiteReport r{"mobility", {}};
  auto c = count_turns(10000, seed);
  double n = static_cast<double>(c.events);
  double fs = c.straight / n, fl = c.left / n, fr = c.right / n;
  bool ok = std::abs(fs - 0.6) <= 0.03 && std::abs(fl - 0.2) <= 0.03 && std::abs(fr - 0.2) <= 0.03;
  r.checks.push_back({"turn_frequencies", ok, fmt("straight=%.4f left=%.4f right=%.4f", fs, fl, fr) +
                                                  " events=" + std::to_string(c.events)});

  scenario::GridLayout layout(3);
  mobility::MobileState bus;
  bus.mover = mobility::Mover::Vehicle;
  bus.heading = scenario::Heading::East;
  bus.x = scenario::GridLayout::block_start(1) + 20.0;
  bus.y = scenario::GridLayout::street_start(1) + scenario::GridLayout::lane_offset(bus.heading, 0);
  bus.speed_mps = mobility::kmh_to_mps(40.0);
  auto rng = substream(seed, "validate.mobility");
  auto next = mobility::step(bus, 1.0, layout, rng);
  double moved = next.x - bus.x;
  r.checks.push_back({"bus_displacement_1s", std::abs(moved - 40.0 / 3.6) < 1e-9,
                      fmt("moved=%.6f m", moved)});
  return r;
}

SuiteReport olla_suite(std::uint64_t seed) {
  SuiteReport r{"olla", {}};
  auto res = radio::run_synthetic_olla(10.0, 2.0, 200000, seed);
  double bler = res.bler();
  r.checks.push_back({"bler_fixed_point", bler >= 0.07 && bler <= 0.11,
                      fmt("bler=%.4f target=%.4f", bler, 0.1 / 1.1)});
  auto s = radio::olla_update({}, false);
  auto t = radio::olla_update({}, true);
  r.checks.push_back({"olla_steps", std::abs(s.offset_db + 1.0) < 1e-12 && std::abs(t.offset_db - 0.1) < 1e-12,
                      fmt("error=%.2f success=%.2f", s.offset_db, t.offset_db)});
  return r;
}

class Counter : public mobility::TurnObserver {
 public:
  explicit Counter(TurnCounts& c) : c_(c) {}
  void on_turn(const mobility::MobileState&, mobility::TurnOptions o, mobility::Turn t) override {
    if (!o.all()) return;
    ++c_.events;
    if (t == mobility::Turn::Straight) ++c_.straight;
    else if (t == mobility::Turn::Left) ++c_.left;
    else ++c_.right;
  }

 private:
  TurnCounts& c_;
};

}  // namespace

TurnCounts count_turns(std::int64_t min_events, std::uint64_t seed) {
  TurnCounts counts;
  Counter observer(counts);
  auto layout = scenario::build_layout(scenario::Regime::NotLimited);
  auto pop = scenario::spawn_population(layout, scenario::Regime::NotLimited, seed);
  std::vector<SplitMix64> rngs;
  for (std::size_t i = 0; i < pop.buses.size(); ++i) rngs.push_back(substream(seed, "turns", {i}));
  while (counts.events < min_events) {
    for (std::size_t i = 0; i < pop.buses.size(); ++i)
      pop.buses[i].motion = mobility::step(pop.buses[i].motion, 1.0, layout, rngs[i], &observer);
  }
  return counts;
}

OracleDiff compare_channel_oracle(int n, std::uint64_t seed) {
  OracleDiff out;
  auto rng = substream(seed, "validate.channel");
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };
  const channel::Scenario classes[] = {channel::Scenario::UMa, channel::Scenario::UMi,
                                       channel::Scenario::InH};
  for (int i = 0; i < n; ++i) {
    auto sc = classes[i % 3];
    bool los = (i / 3) % 2 == 0;
    double fc = u(0.5, 100.0);
    double h_bs, h_ut, d2d;
    switch (sc) {
      case channel::Scenario::UMa:
        h_bs = 25.0;
        h_ut = u(1.5, 22.5);
        d2d = u(10.0, 5000.0);
        break;
      case channel::Scenario::UMi:
        h_bs = 10.0;
        h_ut = u(1.5, 10.0);
        d2d = u(10.0, 5000.0);
        break;
      default:
        h_bs = 3.0;
        h_ut = 1.0 + u(0.0, 1.0);
        d2d = u(1.0, 150.0);
        break;
    }
    auto name = channel::scenario_name(sc);
    double mine = channel::path_loss(sc, los, d2d, h_bs, h_ut, fc).db;
    double ref = oracle::path_loss_db(name, los, d2d, h_bs, h_ut, fc);
    out.max_path_loss_diff_db = std::max(out.max_path_loss_diff_db, std::abs(mine - ref));
    double dl = u(0.0, 1000.0);
    double hl = u(1.5, 22.5);
    out.max_los_diff = std::max(out.max_los_diff, std::abs(channel::los_probability(sc, dl, hl) -
                                                           oracle::los_probability(name, dl, hl)));
    ++out.geometries;
  }
  return out;
}

SuiteReport run_suite(std::string_view suite, std::uint64_t seed) {
  if (suite == "frame") return frame_suite();
  if (suite == "channel") return channel_suite(seed);
  if (suite == "mobility") return mobility_suite(seed);
  if (suite == "olla") return olla_suite(seed);
  throw std::invalid_argument("unknown validation suite '" + std::string(suite) + "'");
}

}  // namespace miab::cli
