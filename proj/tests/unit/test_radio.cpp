#include <doctest.h>

#include <cmath>
#include <limits>

#include "miab/radio.hpp"

using namespace miab;
using namespace miab::radio;

TEST_CASE("shipped MCS table") {
  const auto& t = default_mcs_table();
  CHECK(t.size() == 29);
  for (std::size_t i = 1; i < t.size(); ++i) {
    CHECK(t[i].min_sinr_db > t[i - 1].min_sinr_db);
    CHECK(t[i].spectral_efficiency > t[i - 1].spectral_efficiency);
  }
  CHECK(t[28].spectral_efficiency == 5.5547);
  auto file = load_mcs_table(std::string(MIAB_DATA_DIR) + "/mcs_table.csv");
  REQUIRE(file.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(file[i].min_sinr_db == t[i].min_sinr_db);
    CHECK(file[i].spectral_efficiency == t[i].spectral_efficiency);
  }
}

TEST_CASE("MCS table validation") {
  CHECK_THROWS_AS(parse_mcs_table("0, 1.0, 0.5\n1, 0.5, 0.6\n"), ConfigError);
  CHECK_THROWS_AS(parse_mcs_table("0, 1.0, 0.5\n1, 2.0, 0.4\n"), ConfigError);
  CHECK_THROWS_AS(parse_mcs_table("0, 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_mcs_table(""), ConfigError);
  CHECK(parse_mcs_table("# x\n0, 1.0, 0.5 # y\n\n1, 2.0, 0.6\n").size() == 2);
}

TEST_CASE("MCS selection") {
  const auto& t = default_mcs_table();
  CHECK(select_mcs(-30.0, {}, t) == 0);
  CHECK(select_mcs(100.0, {}, t) == 28);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(select_mcs(t[i].min_sinr_db, {}, t) == static_cast<int>(i));

  auto after_error = olla_update({}, false);
  for (double s = -10; s < 30; s += 0.37) CHECK(select_mcs(s, after_error, t) == select_mcs(s - 1.0, {}, t));

  int prev = 0;
  for (double s = -20; s < 40; s += 0.01) {
    int m = select_mcs(s, {}, t);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("transport blocks") {
  const auto& t = default_mcs_table();
  CHECK(transport_block_bits(66, 28, t) == static_cast<std::int64_t>(std::floor(66 * 12 * 14 * 5.5547)));
  CHECK(transport_block_bits_for_se(66, 0.0) == 0);
  for (int n = 1; n <= 33; ++n)
    for (int m = 0; m < 29; m += 4) {
      auto one = transport_block_bits(n, m, t);
      auto two = transport_block_bits(2 * n, m, t);
      CHECK(two >= 2 * one);
      CHECK(two <= 2 * one + 1);
    }
}

TEST_CASE("OLLA steps and clamp") {
  CHECK(olla_update({}, false).offset_db == -1.0);
  CHECK(olla_update({}, true).offset_db == doctest::Approx(0.1));
  OllaState s;
  for (int i = 0; i < 100; ++i) s = olla_update(s, false);
  CHECK(s.offset_db == -15.0);
  for (int i = 0; i < 1000; ++i) s = olla_update(s, true);
  CHECK(s.offset_db == doctest::Approx(5.0));
}

TEST_CASE("OLLA drives BLER to the step ratio") {
  for (double mean : {5.0, 10.0, 18.0}) {
    auto r = run_synthetic_olla(mean, 2.0, 200000, 3);
    CAPTURE(mean);
    CHECK(std::abs(r.bler() - 0.1 / 1.1) < 0.01);
  }
}

TEST_CASE("noise and power per resource element") {
  CHECK(noise_dbm(12) == doctest::Approx(-106.43).epsilon(1e-4));
  CHECK(noise_dbm(12) == doctest::Approx(-174.0 + 10 * std::log10(720000.0) + 9.0));
  CHECK(per_re_power_dbm(35.0) == doctest::Approx(6.01).epsilon(1e-3));
  CHECK(rsrp_dbm(35.0, 0.0) == per_re_power_dbm(35.0));
  CHECK(rsrp_dbm(35.0, -100.0) == doctest::Approx(per_re_power_dbm(35.0) - 100.0));
}

TEST_CASE("SINR bookkeeping") {
  double signal = 1e-9, noise = db_to_linear(noise_dbm(12));
  auto clean = make_sinr(signal, 0.0, noise);
  CHECK(std::abs(clean.sinr_db - (linear_to_db(signal) - noise_dbm(12))) <= 1e-9);
  double prev = -1e9;
  for (double i = 1e-8; i > 1e-14; i /= 3) {
    auto s = make_sinr(signal, i, noise);
    CHECK(s.sinr_db >= prev);  // less interference never hurts
    prev = s.sinr_db;
  }
  CHECK(make_sinr(0.0, 0.0, noise).sinr_db == -std::numeric_limits<double>::infinity());
}

TEST_CASE("attachment") {
  std::vector<Candidate> c{{1, -80.0}, {2, -78.0}, {3, -90.0}};
  CHECK(attach(std::nullopt, c, 3.0) == 2u);
  CHECK(attach(1u, c, 3.0) == 1u);  // within hysteresis
  CHECK(attach(3u, c, 3.0) == 2u);
  CHECK(attach(7u, c, 3.0) == 2u);  // current server gone
  CHECK_FALSE(attach(std::nullopt, {}, 3.0).has_value());

  auto rng = substream(5, "attach");
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Candidate> cands;
    int n = 1 + trial % 6;
    for (int k = 0; k < n; ++k) cands.push_back({static_cast<std::uint32_t>(k), -120.0 + 60.0 * uniform01(rng)});
    std::optional<std::uint32_t> cur;
    if (trial % 2) cur = static_cast<std::uint32_t>(trial % n);
    double offset = -50.0 + 100.0 * uniform01(rng);
    auto shifted = cands;
    for (auto& s : shifted) s.rsrp_dbm += offset;
    CHECK(attach(cur, cands, 3.0) == attach(cur, shifted, 3.0));
  }
}
