#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "miab/common.hpp"
#include "miab/layout.hpp"
#include "miab/motion_state.hpp"
#include "miab/rng.hpp"

namespace miab::scenario {

enum class Deployment : std::uint8_t { OnlyMacros, MacrosPicos, Miab };
std::string_view deployment_name(Deployment d);
Deployment parse_deployment(std::string_view s);

enum class NodeKind : std::uint8_t { MacroGnb, PicoGnb, MiabDu, MiabMt, PedestrianUe, PassengerUe };
std::string_view kind_name(NodeKind k);

constexpr bool is_base_station(NodeKind k) {
  return k == NodeKind::MacroGnb || k == NodeKind::PicoGnb;
}
constexpr bool is_cell(NodeKind k) { return is_base_station(k) || k == NodeKind::MiabDu; }
constexpr bool is_ue(NodeKind k) {
  return k == NodeKind::PedestrianUe || k == NodeKind::PassengerUe;
}
/// DU and passengers sit inside a bus body.
constexpr bool is_inside_bus(NodeKind k) {
  return k == NodeKind::MiabDu || k == NodeKind::PassengerUe;
}

enum class ArrayType : std::uint8_t { Ura8x8, Ula64, SingleOmni };
enum class ElementPattern : std::uint8_t { Tgpp3D, Omni };

struct AntennaConfig {
  ArrayType array = ArrayType::SingleOmni;
  ElementPattern element = ElementPattern::Omni;
  double max_element_gain_dbi = 0.0;
  double tilt_deg = 0.0;     // mechanical downtilt
  double azimuth_deg = 0.0;  // boresight bearing, counter-clockwise from +x

  int num_elements() const { return array == ArrayType::SingleOmni ? 1 : 64; }
  friend bool operator==(const AntennaConfig&, const AntennaConfig&) = default;
};

/// Per-kind radio and geometry attributes.
struct NodeSpec {
  double height_m;
  double tx_power_dbm;
  AntennaConfig antenna;
  double speed_not_limited_kmh;
  double speed_limited_kmh;
};
const NodeSpec& node_spec(NodeKind kind);

struct NetworkNode {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::PedestrianUe;
  Vec3 position;
  double tx_power_dbm = 0.0;
  AntennaConfig antenna;
  BusId bus = kNoBus;

  double height() const { return position.z; }
};

/// Rigid bus body. Body frame: origin at the footprint centre on the
/// ground, +x towards the front, +y to the left.
struct BusBody {
  static constexpr double kLength = 12.0;
  static constexpr double kWidth = 2.55;
  static constexpr double kHeight = 3.0;
  static constexpr int kSeatColumns = 2;
  static constexpr int kSeatRows = 6;
  static constexpr int kNumSeats = kSeatColumns * kSeatRows;

  static Vec3 du_offset();
  static Vec3 mt_offset();
  static Vec3 seat_offset(int seat);
};

struct Bus {
  BusId id = 0;
  mobility::MobileState motion;
  NodeId du = kNoNode;
  NodeId mt = kNoNode;
  std::vector<NodeId> passengers;
  std::vector<int> seats;  // seat index per passenger, fixed for the run

  double yaw_deg() const { return heading_degrees(motion.heading); }
  Vec3 to_world(Vec3 body_offset) const;
};

/// Oriented box occupied by a bus body.
struct BusBox {
  double cx, cy, yaw_rad;
  double half_length, half_width, height;

  static BusBox of(const Bus& bus);
  bool contains(Vec3 p, double eps = 1e-9) const;
  /// True if the open segment a-b passes through the box interior.
  bool intersects_segment(Vec3 a, Vec3 b) const;
};

struct PopulationCounts {
  int buses = 6;
  int passengers = 36;
  int pedestrians = 36;
  int passengers_per_bus = 6;
};

/// Placement knobs for fixed base stations.
struct SitePlan {
  double macro_triangle_radius_m = 50.0;
  double pico_ring_radius_not_limited_m = 190.0;
  double pico_ring_radius_limited_m = 60.0;
  double limited_macro_inset_m = 5.0;
  double pico_height_m = 10.0;
  double pico_tx_power_dbm = 24.0;
};

struct Population {
  std::vector<Bus> buses;
  std::vector<mobility::MobileState> pedestrians;
};

struct Scene {
  GridLayout layout{1};
  Regime regime = Regime::NotLimited;
  Deployment deployment = Deployment::OnlyMacros;
  std::vector<NetworkNode> nodes;
  std::vector<Bus> buses;
  std::vector<NodeId> pedestrian_nodes;
  std::vector<mobility::MobileState> pedestrian_motion;  // parallel to pedestrian_nodes

  const NetworkNode& node(NodeId id) const { return nodes[id]; }
  std::vector<NodeId> nodes_of(NodeKind k) const;
};

std::vector<NetworkNode> place_base_stations(const GridLayout& layout, Deployment deployment,
                                             Regime regime, const SitePlan& plan = {});

Population spawn_population(const GridLayout& layout, Regime regime, std::uint64_t seed,
                            const PopulationCounts& counts = {});

/// Full scene: base stations, then per bus DU/MT (mIAB only), passengers,
/// pedestrians. Node ids are dense indices into Scene::nodes.
Scene build_scene(Regime regime, Deployment deployment, std::uint64_t seed,
                  const PopulationCounts& counts = {}, const SitePlan& plan = {});

/// Rewrites world positions of every node riding `bus`.
void place_riders(const Bus& bus, std::vector<NetworkNode>& nodes);

}  // namespace miab::scenario
