#include "miab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace miab::scenario {

std::string_view deployment_name(Deployment d) {
  switch (d) {
    case Deployment::OnlyMacros: return "only_macros";
    case Deployment::MacrosPicos: return "macros_picos";
    case Deployment::Miab: return "miab";
  }
  return "?";
}

Deployment parse_deployment(std::string_view s) {
  if (s == "only_macros") return Deployment::OnlyMacros;
  if (s == "macros_picos") return Deployment::MacrosPicos;
  if (s == "miab") return Deployment::Miab;
  throw ConfigError("unknown deployment '" + std::string(s) + "'");
}

std::string_view kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::MacroGnb: return "macro";
    case NodeKind::PicoGnb: return "pico";
    case NodeKind::MiabDu: return "du";
    case NodeKind::MiabMt: return "mt";
    case NodeKind::PedestrianUe: return "pedestrian";
    case NodeKind::PassengerUe: return "passenger";
  }
  return "?";
}

const NodeSpec& node_spec(NodeKind kind) {
  static const std::array<NodeSpec, 6> specs{{
      {25.0, 35.0, {ArrayType::Ura8x8, ElementPattern::Tgpp3D, 8.0, 12.0, 0.0}, 0.0, 0.0},
      {10.0, 24.0, {ArrayType::Ura8x8, ElementPattern::Tgpp3D, 8.0, 4.0, 0.0}, 0.0, 0.0},
      {2.5, 24.0, {ArrayType::Ura8x8, ElementPattern::Tgpp3D, 8.0, 4.0, 0.0}, 40.0, 20.0},
      {3.5, 24.0, {ArrayType::Ula64, ElementPattern::Omni, 0.0, 0.0, 0.0}, 40.0, 20.0},
      {1.5, 24.0, {ArrayType::SingleOmni, ElementPattern::Omni, 0.0, 0.0, 0.0}, 3.0, 3.0},
      {1.8, 24.0, {ArrayType::SingleOmni, ElementPattern::Omni, 0.0, 0.0, 0.0}, 40.0, 20.0},
  }};
  return specs[static_cast<std::size_t>(kind)];
}

Vec3 BusBody::du_offset() { return {-kLength / 2 + 0.5, 0.0, node_spec(NodeKind::MiabDu).height_m}; }
Vec3 BusBody::mt_offset() { return {-kLength / 2 + 0.5, 0.0, node_spec(NodeKind::MiabMt).height_m}; }

Vec3 BusBody::seat_offset(int seat) {
  int row = seat / kSeatColumns;
  int col = seat % kSeatColumns;
  return {-4.0 + 1.6 * row, col == 0 ? 0.6 : -0.6, node_spec(NodeKind::PassengerUe).height_m};
}

Vec3 Bus::to_world(Vec3 o) const {
  double yaw = deg_to_rad(yaw_deg());
  double c = std::cos(yaw), s = std::sin(yaw);
  return {motion.x + c * o.x - s * o.y, motion.y + s * o.x + c * o.y, o.z};
}

BusBox BusBox::of(const Bus& bus) {
  return {bus.motion.x, bus.motion.y, deg_to_rad(bus.yaw_deg()), BusBody::kLength / 2,
          BusBody::kWidth / 2, BusBody::kHeight};
}

namespace {
Vec3 to_box_frame(const BusBox& b, Vec3 p) {
  double dx = p.x - b.cx, dy = p.y - b.cy;
  double c = std::cos(b.yaw_rad), s = std::sin(b.yaw_rad);
  return {c * dx + s * dy, -s * dx + c * dy, p.z};
}
}  // namespace

bool BusBox::contains(Vec3 p, double eps) const {
  auto q = to_box_frame(*this, p);
  return std::abs(q.x) <= half_length + eps && std::abs(q.y) <= half_width + eps &&
         q.z >= -eps && q.z <= height + eps;
}

bool BusBox::intersects_segment(Vec3 a, Vec3 b) const {
  auto p = to_box_frame(*this, a);
  auto q = to_box_frame(*this, b);
  double t0 = 0.0, t1 = 1.0;
  const double lo[3] = {-half_length, -half_width, 0.0};
  const double hi[3] = {half_length, half_width, height};
  const double o[3] = {p.x, p.y, p.z};
  const double d[3] = {q.x - p.x, q.y - p.y, q.z - p.z};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (o[i] <= lo[i] || o[i] >= hi[i]) return false;
      continue;
    }
    double ta = (lo[i] - o[i]) / d[i];
    double tb = (hi[i] - o[i]) / d[i];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 >= t1) return false;
  }
  return t1 - t0 > 1e-12;
}

std::vector<NodeId> Scene::nodes_of(NodeKind k) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (n.kind == k) out.push_back(n.id);
  return out;
}

namespace {
NetworkNode make_node(NodeKind kind, Vec3 pos, double azimuth_deg) {
  const auto& spec = node_spec(kind);
  NetworkNode n;
  n.kind = kind;
  n.position = pos;
  n.position.z = spec.height_m;
  n.tx_power_dbm = spec.tx_power_dbm;
  n.antenna = spec.antenna;
  n.antenna.azimuth_deg = azimuth_deg;
  return n;
}
}  // namespace

std::vector<NetworkNode> place_base_stations(const GridLayout& layout, Deployment deployment,
                                             Regime regime, const SitePlan& plan) {
  std::vector<NetworkNode> out;
  auto c = layout.center();
  if (regime == Regime::NotLimited) {
    for (double a : {90.0, 210.0, 330.0}) {
      double r = deg_to_rad(a);
      Vec3 p{c.x + plan.macro_triangle_radius_m * std::cos(r),
             c.y + plan.macro_triangle_radius_m * std::sin(r), 0};
      out.push_back(make_node(NodeKind::MacroGnb, p, a));
    }
  } else {
    auto blk = layout.block(0, 0);
    Vec3 p{blk.x0 + plan.limited_macro_inset_m, blk.y0 + plan.limited_macro_inset_m, 0};
    out.push_back(make_node(NodeKind::MacroGnb, p, 45.0));
  }
  if (deployment == Deployment::MacrosPicos) {
    double radius = regime == Regime::NotLimited ? plan.pico_ring_radius_not_limited_m
                                                 : plan.pico_ring_radius_limited_m;
    for (int i = 0; i < 6; ++i) {
      double a = 60.0 * i;
      double r = deg_to_rad(a);
      Vec3 p{c.x + radius * std::cos(r), c.y + radius * std::sin(r), 0};
      auto node = make_node(NodeKind::PicoGnb, p, a);
      node.position.z = plan.pico_height_m;
      node.tx_power_dbm = plan.pico_tx_power_dbm;
      out.push_back(node);
    }
  }
  return out;
}

Population spawn_population(const GridLayout& layout, Regime regime, std::uint64_t seed,
                            const PopulationCounts& counts) {
  if (counts.buses < 0 || counts.passengers < 0 || counts.pedestrians < 0 ||
      counts.passengers_per_bus < 0)
    throw ConfigError("population counts must be non-negative");
  if (counts.buses * counts.passengers_per_bus != counts.passengers)
    throw ConfigError("buses x passengers_per_bus must equal the passenger total");
  if (counts.passengers_per_bus > BusBody::kNumSeats)
    throw ConfigError("more passengers per bus than seats");

  auto rng = substream(seed, "population");
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };
  auto pick = [&](int n) { return std::min(n - 1, static_cast<int>(uniform01(rng) * n)); };

  const int n = layout.blocks_per_side();
  const double ext = layout.extent();
  const double bus_speed = mobility::kmh_to_mps(
      regime == Regime::NotLimited ? node_spec(NodeKind::MiabDu).speed_not_limited_kmh
                                   : node_spec(NodeKind::MiabDu).speed_limited_kmh);
  const double walk_speed = mobility::kmh_to_mps(node_spec(NodeKind::PedestrianUe).speed_not_limited_kmh);

  Population pop;
  for (int b = 0; b < counts.buses; ++b) {
    mobility::MobileState s;
    s.mover = mobility::Mover::Vehicle;
    s.speed_mps = bus_speed;
    for (int attempt = 0;; ++attempt) {
      bool along_x = pick(2) == 0;
      int street = pick(n + 1);
      bool positive = pick(2) == 0;
      s.heading = along_x ? (positive ? Heading::East : Heading::West)
                          : (positive ? Heading::North : Heading::South);
      s.lane = pick(GridLayout::kLanesPerDirection);
      double along = uniform(0.0, ext);
      double lateral = GridLayout::street_start(street) + GridLayout::lane_offset(s.heading, s.lane);
      // keep the whole body clear of intersections at spawn
      bool clear = layout.street_at(along - BusBody::kLength / 2) < 0 &&
                   layout.street_at(along + BusBody::kLength / 2) < 0 &&
                   along - BusBody::kLength / 2 > 0 && along + BusBody::kLength / 2 < ext;
      s.x = along_x ? along : lateral;
      s.y = along_x ? lateral : along;
      for (const auto& other : pop.buses) {
        if (std::abs(other.motion.x - s.x) < BusBody::kLength + 3.0 &&
            std::abs(other.motion.y - s.y) < BusBody::kLength + 3.0)
          clear = false;
      }
      if (clear || attempt > 10000) break;
    }
    Bus bus;
    bus.id = static_cast<BusId>(b);
    bus.motion = s;
    std::vector<int> seats(BusBody::kNumSeats);
    std::iota(seats.begin(), seats.end(), 0);
    for (int i = BusBody::kNumSeats - 1; i > 0; --i) std::swap(seats[i], seats[pick(i + 1)]);
    bus.seats.assign(seats.begin(), seats.begin() + counts.passengers_per_bus);
    pop.buses.push_back(std::move(bus));
  }

  const double edge = GridLayout::kSidewalkWidth / 2;
  for (int p = 0; p < counts.pedestrians; ++p) {
    mobility::MobileState s;
    s.mover = mobility::Mover::Walker;
    s.speed_mps = walk_speed;
    int col = pick(n), row = pick(n), side = pick(4);
    bool forward = pick(2) == 0;
    auto blk = layout.block(col, row);
    switch (side) {
      case 0:  // south
      case 1:  // north
        s.y = side == 0 ? blk.y0 - edge : blk.y1 + edge;
        s.x = uniform(blk.x0 - edge, blk.x1 + edge);
        s.heading = forward ? Heading::East : Heading::West;
        break;
      default:  // west / east
        s.x = side == 2 ? blk.x0 - edge : blk.x1 + edge;
        s.y = uniform(blk.y0 - edge, blk.y1 + edge);
        s.heading = forward ? Heading::North : Heading::South;
        break;
    }
    pop.pedestrians.push_back(s);
  }
  return pop;
}

void place_riders(const Bus& bus, std::vector<NetworkNode>& nodes) {
  double yaw = bus.yaw_deg();
  if (bus.du != kNoNode) {
    nodes[bus.du].position = bus.to_world(BusBody::du_offset());
    nodes[bus.du].antenna.azimuth_deg = yaw;
  }
  if (bus.mt != kNoNode) {
    nodes[bus.mt].position = bus.to_world(BusBody::mt_offset());
    nodes[bus.mt].antenna.azimuth_deg = yaw;
  }
  for (std::size_t i = 0; i < bus.passengers.size(); ++i)
    nodes[bus.passengers[i]].position = bus.to_world(BusBody::seat_offset(bus.seats[i]));
}

Scene build_scene(Regime regime, Deployment deployment, std::uint64_t seed,
                  const PopulationCounts& counts, const SitePlan& plan) {
  Scene scene;
  scene.layout = build_layout(regime);
  scene.regime = regime;
  scene.deployment = deployment;
  scene.nodes = place_base_stations(scene.layout, deployment, regime, plan);
  for (std::size_t i = 0; i < scene.nodes.size(); ++i) scene.nodes[i].id = static_cast<NodeId>(i);

  auto pop = spawn_population(scene.layout, regime, seed, counts);
  auto add = [&](NetworkNode n) {
    n.id = static_cast<NodeId>(scene.nodes.size());
    scene.nodes.push_back(n);
    return n.id;
  };

  if (deployment == Deployment::Miab) {
    for (auto& bus : pop.buses) {
      auto du = make_node(NodeKind::MiabDu, {}, 0.0);
      du.bus = bus.id;
      bus.du = add(du);
      auto mt = make_node(NodeKind::MiabMt, {}, 0.0);
      mt.bus = bus.id;
      bus.mt = add(mt);
    }
  }
  for (auto& bus : pop.buses) {
    for (std::size_t i = 0; i < bus.seats.size(); ++i) {
      auto pax = make_node(NodeKind::PassengerUe, {}, 0.0);
      pax.bus = bus.id;
      bus.passengers.push_back(add(pax));
    }
    place_riders(bus, scene.nodes);
  }
  for (const auto& ped : pop.pedestrians) {
    auto node = make_node(NodeKind::PedestrianUe, {ped.x, ped.y, 0}, 0.0);
    scene.pedestrian_nodes.push_back(add(node));
    scene.pedestrian_motion.push_back(ped);
  }
  scene.buses = std::move(pop.buses);
  return scene;
}

}  // namespace miab::scenario
