#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "miab/config.hpp"
#include "miab/frame.hpp"
#include "miab/kernels.hpp"
#include "miab/link_table.hpp"
#include "miab/metrics.hpp"
#include "miab/mobility.hpp"
#include "miab/radio.hpp"
#include "miab/scenario.hpp"

namespace miab::sim {

inline constexpr int kPacketBits = 3072;
inline constexpr int kPacketIntervalSlots = 4;

enum class Dir : std::uint8_t { Dl, Ul };

struct Packet {
  std::uint64_t id = 0;
  SlotIndex created = 0;
  int remaining_bits = kPacketBits;  // still to send on the current hop
  SlotIndex relay_slot = -1;         // slot the first of two hops completed
};

/// Where a UE's traffic goes: straight to a base station, or through the
/// MT/DU pair of a bus whose MT is served by `donor`.
struct Route {
  NodeId cell = kNoNode;
  NodeId donor = kNoNode;
  BusId bus = kNoBus;

  bool attached() const { return cell != kNoNode; }
  bool relayed() const { return bus != kNoBus; }
  friend bool operator==(const Route&, const Route&) = default;
};

/// CBR flow of one UE in one direction. stage[0] is the first hop (the only
/// one for direct routes); stage[1] holds relayed packets waiting at the DU
/// (downlink) or at the DU for the MT (uplink).
struct Flow {
  NodeId ue = kNoNode;
  Dir dir = Dir::Dl;
  Route route;
  std::deque<Packet> stage[2];
  std::int64_t generated_bits = 0;
  std::int64_t delivered_bits = 0;

  bool backlogged() const { return !stage[0].empty() || !stage[1].empty(); }
  std::size_t queued_packets() const { return stage[0].size() + stage[1].size(); }
};

/// Emits one packet per flow on every 4th slot starting at slot 0.
/// Returns the number of packets created.
std::size_t generate_traffic(SlotIndex slot, std::span<Flow> flows, std::uint64_t& next_packet_id);

/// Contiguous round-robin split of n_rbs among citizens, in order starting
/// at citizen `rotation % n`. With `demand` (RBs each citizen can fill), a
/// citizen never gets more than its demand while another still wants more;
/// RBs left after every demand is met are shared out evenly again, so all
/// n_rbs are always granted. Without demand the split is equal. Entry i is
/// citizen i's [begin, end); citizens beyond n_rbs get an empty range.
std::vector<std::pair<int, int>> split_round_robin(int n_citizens, int rotation, int n_rbs = kNumRbs,
                                                   std::span<const int> demand = {});

struct TxRecord {
  NodeId tx = kNoNode;
  NodeId rx = kNoNode;
  frame::Role role = frame::Role::DonorAccess;
  Dir dir = Dir::Dl;
  metrics::LinkCategory category = metrics::LinkCategory::AccessDl;
  int rb_begin = 0;
  int rb_end = 0;
  int mcs = 0;
  std::int64_t tb_bits = 0;
  double sinr_db = 0.0;
  bool ok = false;
};

struct DeliveryRecord {
  NodeId ue = kNoNode;
  Dir dir = Dir::Dl;
  SlotIndex created = 0;
  SlotIndex relay_slot = -1;
  SlotIndex delivered = 0;
};

/// Slot-driven engine. Each step runs: mobility, channel refresh, topology
/// refresh, traffic, scheduling, transmission and decoding, forwarding.
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  void step();
  void run_until(SlotIndex end_slot);
  SlotIndex slot() const { return slot_; }

  const SimConfig& config() const { return cfg_; }
  const frame::FramePattern& pattern() const { return pattern_; }
  const scenario::Scene& scene() const { return scene_; }
  const channel::LinkTable& links() const { return links_; }
  const std::vector<Flow>& flows() const { return flows_; }
  const std::vector<NodeId>& ues() const { return ues_; }
  std::optional<NodeId> serving(NodeId node) const;
  const std::vector<TxRecord>& last_transmissions() const { return last_tx_; }
  const std::vector<DeliveryRecord>& deliveries() const { return deliveries_; }

  /// Writes "slot,entity,x,y,heading" rows every `every_slots` slots.
  void set_trace(std::ostream* out, int every_slots = 400);

  metrics::MetricsBundle bundle() const;

 private:
  struct Citizen {
    NodeId peer;
    BusId bus;  // set for MT citizens
    int ue;     // UE index, -1 for MT citizens
  };
  struct LinkAdapt {
    radio::OllaState olla;
    double last_sinr_db = 0.0;
    bool measured = false;
  };

  void refresh_topology();
  void rehome(Flow& flow, const Route& route);
  void schedule_and_transmit();
  std::int64_t queued_bits(const Citizen& who, bool downlink, scenario::NodeKind cell) const;
  /// Fewest RBs whose transport block at `mcs` carries `bits`, capped at the carrier.
  int rbs_for(std::int64_t bits, int mcs) const;
  std::int64_t consume(std::deque<Packet>& q, std::int64_t bits, std::vector<Packet>& done);
  std::int64_t consume_bus(BusId bus, Dir dir, int stage, std::int64_t bits,
                           std::vector<std::pair<int, Packet>>& done);
  void deliver(int flow_index, const Packet& p);
  void write_trace();

  Flow& dl(int ue) { return flows_[2 * static_cast<std::size_t>(ue)]; }
  Flow& ul(int ue) { return flows_[2 * static_cast<std::size_t>(ue) + 1]; }
  const Flow& dl(int ue) const { return flows_[2 * static_cast<std::size_t>(ue)]; }
  const Flow& ul(int ue) const { return flows_[2 * static_cast<std::size_t>(ue) + 1]; }

  SimConfig cfg_;
  frame::FramePattern pattern_;
  radio::McsTable mcs_;
  scenario::Scene scene_;
  channel::LinkTable links_;
  mobility::MobilityStreams streams_;
  channel::Exec exec_;

  SlotIndex slot_ = 0;
  std::uint64_t next_packet_id_ = 0;

  std::vector<NodeId> ues_;         // UE index -> node
  std::vector<int> ue_index_;       // node -> UE index or -1
  std::vector<NodeId> cells_;       // macros, picos, DUs
  std::vector<NodeId> serving_;     // per node, kNoNode when unattached
  std::vector<Flow> flows_;         // 2 per UE: DL then UL
  std::vector<std::vector<int>> direct_ues_;   // per node (cell) -> UE indices
  std::vector<std::vector<int>> relay_ues_;    // per bus -> UE indices
  std::vector<std::vector<BusId>> donor_buses_;  // per node (macro) -> buses
  std::vector<std::uint64_t> rr_;   // per node rotation counter
  std::vector<LinkAdapt> adapt_;    // per ordered node pair

  std::vector<metrics::UeStats> stats_;
  metrics::McsHistogram hist_;
  std::array<std::int64_t, 4> tx_count_{};
  std::array<std::int64_t, 4> err_count_{};
  std::int64_t handovers_ = 0;

  std::vector<TxRecord> last_tx_;
  std::vector<DeliveryRecord> deliveries_;
  std::vector<std::pair<int, Packet>> forward_;

  std::ostream* trace_ = nullptr;
  int trace_every_ = 400;
};

metrics::MetricsBundle run(const SimConfig& config);

}  // namespace miab::sim
