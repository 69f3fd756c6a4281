#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "miab/channel.hpp"
#include "miab/link_table.hpp"
#include "miab/mobility.hpp"
#include "miab/oracle.hpp"
#include "miab/radio.hpp"

using namespace miab;
using namespace miab::channel;
using scenario::NodeKind;

namespace {

std::vector<scenario::BusBox> boxes_of(const scenario::Scene& s) {
  std::vector<scenario::BusBox> out;
  for (const auto& b : s.buses) out.push_back(scenario::BusBox::of(b));
  return out;
}

Scenario parse_scenario(const std::string& s) {
  if (s == "UMa") return Scenario::UMa;
  if (s == "UMi") return Scenario::UMi;
  return Scenario::InH;
}

struct OracleRow {
  std::string quantity, scenario;
  std::vector<double> v;  // los d2d h_bs h_ut fc tilt azimuth dx dy dz n se value
};

std::vector<OracleRow> load_oracle() {
  std::ifstream in(MIAB_ORACLE_CSV);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  std::vector<OracleRow> rows;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    OracleRow r;
    std::getline(ss, r.quantity, ',');
    std::getline(ss, r.scenario, ',');
    while (std::getline(ss, cell, ',')) r.v.push_back(cell.empty() ? NAN : std::stod(cell));
    REQUIRE(r.v.size() == 13);
    rows.push_back(r);
  }
  return rows;
}

double sample_corr(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("frozen oracle values") {
  auto rows = load_oracle();
  int seen[5] = {};
  for (const auto& r : rows) {
    const auto& v = r.v;
    if (r.quantity == "path_loss") {
      ++seen[0];
      double got = path_loss(parse_scenario(r.scenario), v[0] != 0, v[1], v[2], v[3], v[4]).db;
      CHECK(std::abs(got - v[12]) <= 1e-9);
    } else if (r.quantity == "los_probability") {
      ++seen[1];
      CHECK(std::abs(los_probability(parse_scenario(r.scenario), v[1], v[3]) - v[12]) <= 1e-12);
    } else if (r.quantity == "element_gain") {
      ++seen[2];
      scenario::AntennaConfig a{scenario::ArrayType::Ura8x8, scenario::ElementPattern::Tgpp3D, 8.0, v[5], v[6]};
      CHECK(std::abs(element_gain_db(a, {v[7], v[8], v[9]}) - v[12]) <= 1e-9);
    } else if (r.quantity == "noise_dbm") {
      ++seen[3];
      CHECK(std::abs(radio::noise_dbm(static_cast<int>(v[10])) - v[12]) <= 1e-9);
    } else if (r.quantity == "tb_bits") {
      ++seen[4];
      CHECK(radio::transport_block_bits_for_se(static_cast<int>(v[10]), v[11]) == static_cast<std::int64_t>(v[12]));
    }
  }
  for (int k : seen) CHECK(k > 0);
}

TEST_CASE("path loss agrees with the in-tree table restatement") {
  auto rng = substream(17, "pl");
  for (int i = 0; i < 3000; ++i) {
    auto sc = static_cast<Scenario>(i % 3);
    bool los = i % 2 == 0;
    double h_bs = sc == Scenario::UMa ? 25.0 : sc == Scenario::UMi ? 10.0 : 3.0;
    double h_ut = 1.5 + uniform01(rng) * (sc == Scenario::InH ? 0.5 : 8.0);
    double d = (sc == Scenario::InH ? 1.0 : 10.0) + uniform01(rng) * 800.0;
    double got = path_loss(sc, los, d, h_bs, h_ut).db;
    CHECK(std::abs(got - oracle::path_loss_db(scenario_name(sc), los, d, h_bs, h_ut, 28.0)) <= 1e-9);
  }
}

TEST_CASE("path loss examples") {
  const double d2d = std::sqrt(100.0 * 100.0 - 23.5 * 23.5);
  double pl = path_loss(Scenario::UMa, true, d2d, 25.0, 1.5, 28.0).db;
  CHECK(std::abs(pl - (28.0 + 22.0 * std::log10(100.0) + 20.0 * std::log10(28.0))) <= 1e-9);
  auto clamped = path_loss(Scenario::UMi, false, 3.0, 10.0, 1.5);
  CHECK(clamped.clamped);
  CHECK(clamped.db == path_loss(Scenario::UMi, false, 10.0, 10.0, 1.5).db);
  CHECK_FALSE(path_loss(Scenario::InH, true, 2.0, 2.5, 1.8).clamped);
}

TEST_CASE("path loss is monotone in distance and NLOS never beats LOS") {
  struct Geo { Scenario s; double h_bs, h_ut; };
  const Geo geos[] = {{Scenario::UMa, 25, 1.5}, {Scenario::UMa, 25, 3.5}, {Scenario::UMa, 25, 2.5},
                      {Scenario::UMi, 10, 1.5}, {Scenario::UMi, 3.5, 1.8}, {Scenario::UMi, 3.5, 2.5},
                      {Scenario::InH, 2.5, 1.8}, {Scenario::InH, 3.0, 1.0}};
  for (const auto& g : geos)
    for (bool los : {true, false}) {
      double prev = -1e9;
      for (double d = 0.1; d < 3000.0; d *= 1.01) {
        double pl = path_loss(g.s, los, d, g.h_bs, g.h_ut).db;
        CHECK(pl >= prev - 1e-12);
        prev = pl;
        if (!los) CHECK(pl >= path_loss(g.s, true, d, g.h_bs, g.h_ut).db - 1e-12);
      }
    }
}

TEST_CASE("LOS probability") {
  CHECK(los_probability(Scenario::UMi, 18.0) == 1.0);
  CHECK(los_probability(Scenario::UMa, 10.0) == 1.0);
  for (double d = 0; d < 2000; d += 3.7) {
    for (auto s : {Scenario::UMa, Scenario::UMi, Scenario::InH}) {
      double p = los_probability(s, d, 1.5);
      CHECK((p >= 0.0 && p <= 1.0));
      CHECK(std::abs(p - oracle::los_probability(scenario_name(s), d, 1.5)) <= 1e-12);
    }
  }
  LinkClass forced{Scenario::UMi, true, 1};
  for (double u = 0; u < 1; u += 0.01) CHECK_FALSE(los_state(forced, u, 1.0));
  LinkClass open{Scenario::UMi, false, 0};
  CHECK(los_state(open, 0.999, 5.0));
}

TEST_CASE("classification of the scene") {
  auto scene = scenario::build_scene(scenario::Regime::NotLimited, scenario::Deployment::Miab, 4);
  auto boxes = boxes_of(scene);
  const auto& n = scene.nodes;
  NodeId macro = scene.nodes_of(NodeKind::MacroGnb)[0];
  const auto& b0 = scene.buses[0];
  const auto& b1 = scene.buses[1];

  auto c = classify(n[macro], n[b0.mt], boxes);
  CHECK(c.scenario == Scenario::UMa);
  CHECK(c.penetration_count == 0);
  CHECK(classify(n[macro], n[scene.pedestrian_nodes[0]], boxes).scenario == Scenario::UMa);

  c = classify(n[b0.du], n[b0.passengers[0]], boxes);
  CHECK(c.scenario == Scenario::InH);
  CHECK(c.penetration_count == 0);
  CHECK_FALSE(c.forced_nlos);

  c = classify(n[b0.du], n[b1.passengers[0]], boxes);
  CHECK(c.penetration_count == 2);
  CHECK(c.forced_nlos);
  CHECK(c.scenario == Scenario::UMi);

  CHECK(classify(n[b0.mt], n[b1.du], boxes).scenario == Scenario::UMi);
  c = classify(n[b0.du], n[scene.pedestrian_nodes[0]], boxes);
  CHECK(c.scenario == Scenario::UMi);
  CHECK(c.penetration_count >= 1);

  for (NodeId a = 0; a < n.size(); ++a)
    for (NodeId b = a + 1; b < n.size(); ++b) {
      auto ab = classify(n[a], n[b], boxes);
      CHECK(ab == classify(n[b], n[a], boxes));
      CHECK(ab.penetration_count <= kMaxPenetrations);
      CHECK(ab.forced_nlos == (ab.penetration_count > 0));
    }
}

TEST_CASE("shadowing statistics") {
  auto rng = substream(2, "sh");
  const int n = 100000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    double v = ShadowingProcess(rng).value_db(Scenario::UMa, false);
    s1 += v;
    s2 += v * v;
  }
  double sigma = std::sqrt(s2 / n - (s1 / n) * (s1 / n));
  CHECK(std::abs(sigma - 6.0) <= 0.1);

  ShadowingProcess p(rng);
  auto before = p.unit();
  p.advance(0.0, Scenario::UMi, false, rng);
  CHECK(p.unit() == before);

  std::vector<double> a, far, near;
  for (int i = 0; i < 10000; ++i) {
    ShadowingProcess q(rng);
    a.push_back(q.unit());
    auto q1 = q, q2 = q;
    q1.advance(1000.0, Scenario::UMi, false, rng);
    q2.advance(13.0, Scenario::UMi, false, rng);
    far.push_back(q1.unit());
    near.push_back(q2.unit());
  }
  CHECK(std::abs(sample_corr(a, far)) < 0.05);
  CHECK(std::abs(sample_corr(a, near) - std::exp(-1.0)) < 0.03);
}

TEST_CASE("antenna gains") {
  scenario::AntennaConfig macro = scenario::node_spec(NodeKind::MacroGnb).antenna;
  macro.tilt_deg = 0;
  CHECK(element_gain_db(macro, {1, 0, 0}) == doctest::Approx(8.0));
  CHECK(antenna_gain_db(macro, {1, 0, 0}, true) == doctest::Approx(8.0 + 10.0 * std::log10(64.0)));
  CHECK(antenna_gain_db(macro, {1, 0, 0}, true) == doctest::Approx(26.0618).epsilon(1e-4));
  double a32 = 8.0 - element_gain_db(macro, {std::cos(deg_to_rad(32.5)), std::sin(deg_to_rad(32.5)), 0});
  double a65 = 8.0 - element_gain_db(macro, {std::cos(deg_to_rad(65.0)), std::sin(deg_to_rad(65.0)), 0});
  CHECK(a32 == doctest::Approx(3.0));
  CHECK(a65 == doctest::Approx(12.0));
  CHECK(8.0 - element_gain_db(macro, {-1, 0, 0}) == doctest::Approx(30.0));

  const auto& ue = scenario::node_spec(NodeKind::PedestrianUe).antenna;
  for (Vec3 d : {Vec3{1, 0, 0}, Vec3{0, -1, 3}, Vec3{-2, 5, -1}}) {
    CHECK(antenna_gain_db(ue, d, true) == 0.0);
    CHECK(antenna_gain_db(ue, d, false) == 0.0);
  }
  CHECK(array_gain_db(scenario::node_spec(NodeKind::MiabMt).antenna) == doctest::Approx(10.0 * std::log10(64.0)));
}

TEST_CASE("fading has unit mean power") {
  for (bool los : {false, true}) {
    auto rng = substream(los ? 1 : 2, "fade");
    double m = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) m += db_to_linear(-fading_loss_db(los, rng));
    CHECK(m / n == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("link table bookkeeping") {
  auto scene = scenario::build_scene(scenario::Regime::NotLimited, scenario::Deployment::Miab, 6);
  LinkTableConfig cfg;
  cfg.seed = 6;
  LinkTable lt(scene, cfg);
  const std::size_t n = scene.nodes.size();
  CHECK(lt.num_pairs() == n * (n - 1) / 2);
  std::vector<bool> hit(lt.num_pairs(), false);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      auto i = lt.pair_index(a, b);
      CHECK(i == lt.pair_index(b, a));
      REQUIRE(i < hit.size());
      CHECK_FALSE(hit[i]);
      hit[i] = true;
    }
  CHECK(lt.update(scene, 0) == lt.num_pairs());
  CHECK(lt.update(scene, 1) == 0);

  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      auto ab = lt.link(a, b, false);
      auto ba = lt.link(b, a, false);
      CHECK(ab.propagation_loss_db() == ba.propagation_loss_db());
      CHECK(ab.tx_gain_db == ba.rx_gain_db);
      CHECK(ab.penetration_db == 20.0 * ab.cls.penetration_count);
      CHECK(ab.total_loss_db() == doctest::Approx(ab.path_loss_db + ab.shadowing_db + ab.penetration_db -
                                                  ab.tx_gain_db - ab.rx_gain_db + ab.fading_db));
      auto serving = lt.link(a, b, true);
      CHECK(serving.tx_gain_db == doctest::Approx(ab.tx_gain_db + lt.array_gain_db(a)));
      CHECK(lt.coupling(a, b) == doctest::Approx(db_to_linear(-ab.total_loss_db())).epsilon(1e-12));
    }
}

TEST_CASE("channel series reproduce, match across execution modes, and keep forced NLOS") {
  auto make = [] { return scenario::build_scene(scenario::Regime::Limited, scenario::Deployment::Miab, 8); };
  auto s1 = make(), s2 = make();
  LinkTableConfig cfg;
  cfg.seed = 8;
  LinkTable serial(s1, cfg), parallel(s2, cfg);
  mobility::MobilityStreams m1(8, s1.buses.size(), s1.pedestrian_nodes.size());
  mobility::MobilityStreams m2(8, s2.buses.size(), s2.pedestrian_nodes.size());
  for (SlotIndex t = 0; t < 2000; t += 20) {
    if (t > 0) {
      mobility::advance_scene(s1, 20 * kSlotSeconds * 50, m1);
      mobility::advance_scene(s2, 20 * kSlotSeconds * 50, m2);
    }
    auto r1 = serial.update(s1, t, Exec::Serial);
    auto r2 = parallel.update(s2, t, Exec::Parallel);
    CHECK(r1 == r2);
    for (NodeId a = 0; a < s1.nodes.size(); ++a)
      for (NodeId b = a + 1; b < s1.nodes.size(); ++b) {
        const auto& p = serial.pair(a, b);
        const auto& q = parallel.pair(a, b);
        CHECK(p.state.propagation_loss_db() == q.state.propagation_loss_db());
        CHECK(p.state.los == q.state.los);
        if (p.state.cls.forced_nlos) CHECK_FALSE(p.state.los);
        CHECK(serial.coupling(a, b) == parallel.coupling(a, b));
      }
  }
  CHECK(serial.clamp_count() == parallel.clamp_count());
}
