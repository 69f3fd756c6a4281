#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "miab/layout.hpp"
#include "miab/motion_state.hpp"
#include "miab/rng.hpp"
#include "miab/scenario.hpp"

namespace miab::mobility {

enum class Turn : std::uint8_t { Straight, Left, Right };

inline constexpr std::array<double, 3> kTurnProbabilities{0.6, 0.2, 0.2};

struct TurnOptions {
  bool straight = true;
  bool left = true;
  bool right = true;
  bool all() const { return straight && left && right; }
};

/// Samples a turn with the straight/left/right weights, renormalised over
/// the options that keep the entity on the road network.
Turn sample_turn(SplitMix64& rng, TurnOptions options = {});

/// Receives one call per intersection an entity enters.
struct TurnObserver {
  virtual ~TurnObserver() = default;
  virtual void on_turn(const MobileState& at_entry, TurnOptions options, Turn choice) = 0;
};

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Advances an entity by speed * dt along its heading, sampling a turn on
/// each intersection entry. Any dt >= 0 is accepted; several intersections
/// may be crossed in one call.
MobileState step(const MobileState& entity, double dt_s, const scenario::GridLayout& layout,
                 SplitMix64& rng, TurnObserver* observer = nullptr);

/// True if the entity sits on its lane / sidewalk network.
bool on_network(const MobileState& entity, const scenario::GridLayout& layout);

/// Moves DU, MT and passengers of `bus` to the bus pose.
void sync_riders(const scenario::Bus& bus, std::vector<scenario::NetworkNode>& nodes);

/// Per-entity random substreams keyed by run seed and entity index.
class MobilityStreams {
 public:
  MobilityStreams(std::uint64_t seed, std::size_t buses, std::size_t pedestrians);
  SplitMix64& bus(std::size_t i) { return streams_[i]; }
  SplitMix64& pedestrian(std::size_t i) { return streams_[buses_ + i]; }

 private:
  std::size_t buses_;
  std::vector<SplitMix64> streams_;
};

/// Steps every bus and pedestrian of the scene by dt and re-places riders.
/// Entities are independent, so the loop is parallel when `parallel` is set
/// and gives identical results either way.
void advance_scene(scenario::Scene& scene, double dt_s, MobilityStreams& streams,
                   bool parallel = false);

}  // namespace miab::mobility
