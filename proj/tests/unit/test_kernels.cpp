#include <doctest.h>

#include <cmath>

#include "miab/kernels.hpp"
#include "miab/mobility.hpp"

using namespace miab;
using namespace miab::kernels;
using scenario::NodeKind;

namespace {

struct World {
  scenario::Scene scene;
  channel::LinkTable links;
  explicit World(std::uint64_t seed)
      : scene(scenario::build_scene(scenario::Regime::NotLimited, scenario::Deployment::Miab, seed)),
        links(scene, [seed] {
          channel::LinkTableConfig c;
          c.seed = seed;
          return c;
        }()) {
    links.update(scene, 0);
  }

  Transmission tx(NodeId from, NodeId to, int b0, int b1) const {
    return {from, to, b0, b1, db_to_linear(radio::per_re_power_dbm(scene.node(from).tx_power_dbm)),
            db_to_linear(links.gain_db(from, to, true))};
  }
};

std::vector<Transmission> random_slot(const World& w, SplitMix64& rng, int n) {
  std::vector<Transmission> out;
  const auto cells = w.scene.nodes_of(NodeKind::MacroGnb);
  for (int i = 0; i < n; ++i) {
    NodeId a = static_cast<NodeId>(uniform01(rng) * w.scene.nodes.size());
    NodeId b = static_cast<NodeId>(uniform01(rng) * w.scene.nodes.size());
    if (a == b) b = (b + 1) % w.scene.nodes.size();
    int b0 = static_cast<int>(uniform01(rng) * 60);
    int b1 = b0 + 1 + static_cast<int>(uniform01(rng) * (kNumRbs - b0 - 1));
    out.push_back(w.tx(a, b, b0, b1));
  }
  return out;
}

}  // namespace

TEST_CASE("overlap") {
  Transmission a{0, 1, 0, 10}, b{2, 3, 5, 20}, c{4, 5, 10, 12};
  CHECK(rb_overlap(a, b) == 5);
  CHECK(rb_overlap(a, c) == 0);
  CHECK(rb_overlap(b, c) == 2);
}

TEST_CASE("parallel SINR matches the serial loop and the reference") {
  World w(3);
  auto rng = substream(3, "slots");
  for (int trial = 0; trial < 40; ++trial) {
    auto txs = random_slot(w, rng, 1 + trial * 3);
    auto ref = evaluate_sinr_reference(txs, w.links);
    auto ser = evaluate_sinr(txs, w.links, Exec::Serial);
    auto par = evaluate_sinr(txs, w.links, Exec::Parallel);
    REQUIRE(ref.size() == txs.size());
    for (std::size_t i = 0; i < txs.size(); ++i) {
      CHECK(ser[i].sinr_db == par[i].sinr_db);
      CHECK(ser[i].interference_mw == par[i].interference_mw);
      CHECK(ser[i].sinr_db == doctest::Approx(ref[i].sinr_db).epsilon(1e-12));
    }
  }
}

TEST_CASE("lone transmission gives the plain SNR") {
  World w(4);
  NodeId macro = w.scene.nodes_of(NodeKind::MacroGnb)[0];
  NodeId ped = w.scene.pedestrian_nodes[0];
  for (int n_rb : {1, 10, 66}) {
    Transmission t = w.tx(macro, ped, 0, n_rb);
    auto s = evaluate_sinr(std::span(&t, 1), w.links, Exec::Serial)[0];
    auto st = w.links.link(macro, ped, true);
    double snr = radio::per_re_power_dbm(35.0) + st.tx_gain_db + st.rx_gain_db - st.propagation_loss_db() +
                 10 * std::log10(n_rb * 12.0) - radio::noise_dbm(n_rb * 12);
    CHECK(std::abs(s.sinr_db - snr) <= 1e-9);
  }
}

TEST_CASE("removing an interferer never lowers SINR") {
  World w(5);
  auto rng = substream(5, "rm");
  for (int trial = 0; trial < 30; ++trial) {
    auto txs = random_slot(w, rng, 12);
    auto full = evaluate_sinr(txs, w.links, Exec::Serial);
    auto fewer = txs;
    fewer.erase(fewer.begin() + 1 + trial % 11);
    auto part = evaluate_sinr(fewer, w.links, Exec::Serial);
    CHECK(part[0].sinr_db >= full[0].sinr_db);
  }
}

TEST_CASE("passenger uplink lands on a pedestrian's downlink") {
  World w(6);
  const auto& bus = w.scene.buses[0];
  NodeId macro = w.scene.nodes_of(NodeKind::MacroGnb)[0];
  NodeId near = w.scene.pedestrian_nodes[0];
  double best = 1e9;
  for (auto p : w.scene.pedestrian_nodes) {
    double d = distance2d(w.scene.node(p).position, w.scene.node(bus.du).position);
    if (d < best) best = d, near = p;
  }
  std::vector<Transmission> txs{w.tx(macro, near, 0, 20), w.tx(bus.passengers[0], bus.du, 0, 20)};
  auto with = evaluate_sinr(txs, w.links, Exec::Serial);
  auto without = evaluate_sinr(std::span(txs.data(), 1), w.links, Exec::Serial);
  CHECK(with[0].interference_mw > 0);
  CHECK(with[0].sinr_db < without[0].sinr_db);
  txs[1].rb_begin = 20;
  txs[1].rb_end = 40;
  CHECK(evaluate_sinr(txs, w.links, Exec::Serial)[0].sinr_db == without[0].sinr_db);
}
