#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "miab/metrics.hpp"
#include "miab/simcore.hpp"

using namespace miab;
using namespace miab::metrics;

namespace {

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("cdf examples") {
  std::vector<double> v{1, 2, 3}, g{2};
  CHECK(cdf(v, g)[0].second == doctest::Approx(2.0 / 3.0));
  std::vector<double> c(5, 4.0), grid{3.9, 4.0, 4.1};
  auto f = cdf(c, grid);
  CHECK(f[0].second == 0.0);
  CHECK(f[1].second == 1.0);
  CHECK(f[2].second == 1.0);
  std::vector<double> none;
  CHECK_THROWS(cdf(none, g));
}

TEST_CASE("cdf is monotone and bounded") {
  auto rng = substream(3, "cdf");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + trial % 40), grid(50);
    for (auto& x : v) x = standard_normal(rng) * 5;
    for (auto& x : grid) x = standard_normal(rng) * 8;
    std::sort(grid.begin(), grid.end());
    auto f = cdf(v, grid);
    double prev = 0;
    for (auto [x, y] : f) {
      CHECK((y >= 0 && y <= 1));
      CHECK(y >= prev);
      prev = y;
    }
  }
}

TEST_CASE("quantiles") {
  CHECK(quantile({5}, 0.9) == 5);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({3, 1, 2}, 0.0) == 1);
  CHECK(quantile({3, 1, 2}, 1.0) == 3);
  CHECK_THROWS(quantile({}, 0.5));
}

TEST_CASE("per-UE throughput and latency") {
  UeStats u;
  u.dl_delivered_bits = 3072 * 10;
  u.dl_active_slots = 40;
  CHECK(u.throughput_bps() == doctest::Approx(3072.0 * 10 / (40 * 0.25e-3)));
  UeStats idle;
  CHECK(idle.throughput_bps() == 0.0);

  for (int i = 0; i < 9; ++i) u.dl_latency_slots.push_back(4);
  u.dl_latency_slots.push_back(400);
  CHECK(u.p90_latency_ms() == doctest::Approx(1.0 + 0.1 * 99.0));
  u.dl_pending_age_slots.assign(10, 1000);  // undelivered packets count at their age
  CHECK(u.p90_latency_ms() == doctest::Approx(250.0));
}

TEST_CASE("class summaries") {
  MetricsBundle b;
  for (int i = 0; i < 4; ++i) {
    UeStats u;
    u.cls = i < 2 ? UeClass::Passenger : UeClass::Pedestrian;
    u.dl_generated_bits = 1000;
    u.dl_delivered_bits = 250 * i;
    u.dl_active_slots = 1;
    u.dl_latency_slots = {i * 300};
    b.ues.push_back(u);
  }
  auto pas = summarize(b, UeClass::Passenger);
  CHECK(pas.generated_bits == 2000);
  CHECK(pas.delivered_bits == 250);
  CHECK(pas.delivered_fraction == doctest::Approx(0.125));
  CHECK(b.delivered_fraction(UeClass::Pedestrian) == doctest::Approx(1250.0 / 2000.0));
  CHECK(pas.frac_above_3_2_mbps == doctest::Approx(0.0));
  auto ped = summarize(b, UeClass::Pedestrian);
  CHECK(ped.frac_above_3_2_mbps == doctest::Approx(0.0));
  CHECK(ped.frac_ues_p90_below_50ms == 0.0);
  CHECK(pas.frac_ues_p90_below_50ms == 0.5);
  for (auto c : {UeClass::Passenger, UeClass::Pedestrian}) {
    auto s = summarize(b, c);
    CHECK((s.delivered_fraction >= 0 && s.delivered_fraction <= 1));
  }
}

TEST_CASE("export writes five files with the run hash") {
  sim::SimConfig c;
  c.deployment = scenario::Deployment::Miab;
  c.duration_ms = 100.0;
  auto b = sim::run(c);
  auto dir = std::filesystem::temp_directory_path() / "miab_export_test";
  std::filesystem::remove_all(dir);
  export_bundle(b, dir);
  const char* files[] = {"throughput_cdf.csv", "latency_cdf.csv", "totals.csv", "mcs_hist.csv", "summary.txt"};
  const std::string tag = "# config_hash=" + hash_hex(b.config_hash);
  for (const char* f : files) {
    auto l = lines_of(dir / f);
    REQUIRE_FALSE(l.empty());
    CHECK(l[0].rfind(tag, 0) == 0);
  }

  std::map<std::string, std::int64_t> totals;
  for (const auto& l : lines_of(dir / "totals.csv")) {
    auto comma = l.find(',');
    if (l[0] == '#' || l.rfind("key", 0) == 0) continue;
    totals[l.substr(0, comma)] = std::stoll(l.substr(comma + 1));
  }
  CHECK(totals["generated_passenger_bits"] == 36 * 3072 * 100);
  CHECK(totals["slots"] == 400);

  std::array<std::int64_t, 4> col{};
  for (const auto& l : lines_of(dir / "mcs_hist.csv")) {
    if (l[0] == '#' || l.rfind("mcs", 0) == 0) continue;
    std::stringstream ss(l);
    std::string cell;
    std::getline(ss, cell, ',');
    for (auto& c : col) {
      std::getline(ss, cell, ',');
      c += std::stoll(cell);
    }
  }
  CHECK(col == b.transmissions);
  std::filesystem::remove_all(dir);
}
