#include <doctest.h>

#include <cmath>

#include "miab/mobility.hpp"
#include "miab/validate.hpp"

using namespace miab;
using namespace miab::scenario;
using namespace miab::mobility;

namespace {

MobileState bus_at(double x, Heading h) {
  MobileState s;
  s.mover = Mover::Vehicle;
  s.heading = h;
  s.x = x;
  s.y = GridLayout::street_start(1) + GridLayout::lane_offset(h, 0);
  s.speed_mps = kmh_to_mps(40.0);
  return s;
}

}  // namespace

TEST_CASE("straight segment keeps heading") {
  GridLayout layout(3);
  auto rng = substream(1, "t");
  auto s = bus_at(GridLayout::block_start(1) + 10.0, Heading::East);
  auto n = step(s, 1.0, layout, rng);
  CHECK(n.heading == Heading::East);
  CHECK(n.x - s.x == doctest::Approx(40.0 / 3.6).epsilon(1e-12));
  CHECK(n.y == s.y);
}

TEST_CASE("zero dt and zero speed are identities") {
  GridLayout layout(3);
  auto rng = substream(1, "t");
  auto s = bus_at(GridLayout::block_start(1) + 10.0, Heading::East);
  CHECK(step(s, 0.0, layout, rng) == s);
  s.speed_mps = 0;
  CHECK(step(s, 5.0, layout, rng) == s);
}

TEST_CASE("turn sampling frequencies") {
  auto rng = substream(9, "turns");
  int counts[3] = {};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(sample_turn(rng))];
  CHECK(counts[0] / double(n) == doctest::Approx(0.6).epsilon(0.02));
  CHECK(counts[1] / double(n) == doctest::Approx(0.2).epsilon(0.03));
  CHECK(counts[2] / double(n) == doctest::Approx(0.2).epsilon(0.03));

  TurnOptions only_left{false, true, false};
  for (int i = 0; i < 100; ++i) CHECK(sample_turn(rng, only_left) == Turn::Left);
  CHECK_THROWS_AS(sample_turn(rng, {false, false, false}), TopologyError);
}

TEST_CASE("intersection turn statistics on the grid") {
  auto c = cli::count_turns(10000, 4);
  double n = static_cast<double>(c.events);
  CHECK(std::abs(c.straight / n - 0.6) <= 0.03);
  CHECK(std::abs(c.left / n - 0.2) <= 0.03);
  CHECK(std::abs(c.right / n - 0.2) <= 0.03);
}

TEST_CASE("riders follow a 90 degree rotation") {
  auto scene = build_scene(Regime::NotLimited, Deployment::Miab, 2);
  auto& bus = scene.buses[0];
  std::vector<Vec3> before;
  for (auto id : bus.passengers) before.push_back(scene.node(id).position - Vec3{bus.motion.x, bus.motion.y, 0});
  auto mt_before = scene.node(bus.mt).position - Vec3{bus.motion.x, bus.motion.y, 0};

  sync_riders(bus, scene.nodes);
  for (std::size_t i = 0; i < bus.passengers.size(); ++i) {
    auto p = scene.node(bus.passengers[i]).position - Vec3{bus.motion.x, bus.motion.y, 0};
    CHECK(p.x == doctest::Approx(before[i].x));
    CHECK(p.y == doctest::Approx(before[i].y));
  }

  bus.motion.heading = turn_left(bus.motion.heading);
  sync_riders(bus, scene.nodes);
  for (std::size_t i = 0; i < bus.passengers.size(); ++i) {
    auto p = scene.node(bus.passengers[i]).position - Vec3{bus.motion.x, bus.motion.y, 0};
    CHECK(p.x == doctest::Approx(-before[i].y));
    CHECK(p.y == doctest::Approx(before[i].x));
    CHECK(p.z == before[i].z);
  }
  auto mt = scene.node(bus.mt).position - Vec3{bus.motion.x, bus.motion.y, 0};
  CHECK(mt.x == doctest::Approx(-mt_before.y));
  CHECK(mt.z == 3.5);
}

TEST_CASE("a long run keeps bodies rigid and everyone on the network") {
  for (auto regime : {Regime::NotLimited, Regime::Limited}) {
    auto scene = build_scene(regime, Deployment::Miab, 7);
    MobilityStreams streams(7, scene.buses.size(), scene.pedestrian_nodes.size());
    std::vector<double> span;
    for (const auto& b : scene.buses) span.push_back(distance3d(scene.node(b.du).position, scene.node(b.mt).position));
    for (int t = 0; t < 600; ++t) {
      advance_scene(scene, 0.5, streams);
      for (std::size_t i = 0; i < scene.buses.size(); ++i) {
        const auto& b = scene.buses[i];
        CHECK(distance3d(scene.node(b.du).position, scene.node(b.mt).position) == doctest::Approx(span[i]).epsilon(1e-12));
        CHECK(on_network(b.motion, scene.layout));
        int h = static_cast<int>(b.motion.heading);
        CHECK((h >= 0 && h < 4));
        auto box = BusBox::of(b);
        for (auto p : b.passengers) CHECK(box.contains(scene.node(p).position));
      }
      for (const auto& m : scene.pedestrian_motion) CHECK(on_network(m, scene.layout));
    }
  }
}

TEST_CASE("trajectories reproduce and do not depend on the parallel flag") {
  auto a = build_scene(Regime::NotLimited, Deployment::Miab, 12);
  auto b = a;
  MobilityStreams sa(12, a.buses.size(), a.pedestrian_nodes.size());
  MobilityStreams sb(12, b.buses.size(), b.pedestrian_nodes.size());
  for (int t = 0; t < 400; ++t) {
    advance_scene(a, 0.25, sa, false);
    advance_scene(b, 0.25, sb, true);
  }
  for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i].position == b.nodes[i].position);
  for (std::size_t i = 0; i < a.buses.size(); ++i) CHECK(a.buses[i].motion == b.buses[i].motion);
}

TEST_CASE("one large step equals many small ones in distance travelled") {
  GridLayout layout(3);
  auto s = bus_at(GridLayout::block_start(0) + 5.0, Heading::East);
  auto r1 = substream(3, "x");
  auto r2 = substream(3, "x");
  auto big = step(s, 20.0, layout, r1);
  auto small = s;
  for (int i = 0; i < 80; ++i) small = step(small, 0.25, layout, r2);
  CHECK(big.x == doctest::Approx(small.x).epsilon(1e-9));
  CHECK(big.y == doctest::Approx(small.y).epsilon(1e-9));
  CHECK(big.heading == small.heading);
}
