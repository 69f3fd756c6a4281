#pragma once

#include <cstdint>
#include <vector>

#include "miab/channel.hpp"
#include "miab/common.hpp"
#include "miab/scenario.hpp"

namespace miab::channel {

enum class Exec : std::uint8_t { Serial, Parallel };

struct LinkTableConfig {
  std::uint64_t seed = 1;
  bool fading = true;
  int refresh_slots = 100;
  double refresh_distance_m = 0.5;
  int fading_block_slots = 40;
  double fc_ghz = kCarrierGHz;
};

/// Channel record of one unordered pair (a < b). In `state`, tx_gain_db is
/// the element gain at a towards b and rx_gain_db the one at b towards a.
struct PairRecord {
  LinkState state;
  double d2d_m = 0.0;
  double d3d_m = 0.0;
  Vec3 rel_at_refresh;  // b - a
  SlotIndex last_refresh = -1;
  std::int64_t fading_block = -1;
  std::uint64_t epoch = 0;
  double los_draw = 0.0;
  ShadowingProcess shadow;
};

/// Large-scale channel for every node pair of a scene, refreshed lazily.
/// A pair is recomputed every `refresh_slots` slots or as soon as its
/// relative position has moved more than `refresh_distance_m`; fading is
/// redrawn per pair every `fading_block_slots`.
class LinkTable {
 public:
  LinkTable(const scenario::Scene& scene, const LinkTableConfig& config);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_pairs() const { return pairs_.size(); }

  /// Brings every due pair up to date for `slot`. Returns how many pairs
  /// had their large-scale state recomputed.
  std::size_t update(const scenario::Scene& scene, SlotIndex slot, Exec exec = Exec::Serial);

  const PairRecord& pair(NodeId a, NodeId b) const { return pairs_[pair_index(a, b)]; }
  std::size_t pair_index(NodeId a, NodeId b) const;

  /// Link state for tx -> rx, with array gains at the ends when serving.
  LinkState link(NodeId tx, NodeId rx, bool serving) const;
  /// Antenna gains minus propagation loss, in dB.
  double gain_db(NodeId tx, NodeId rx, bool serving, bool with_fading = true) const;
  /// Linear gain with element patterns only: what an unintended receiver sees.
  double coupling(NodeId tx, NodeId rx) const { return coupling_[pair_index(tx, rx)]; }

  double array_gain_db(NodeId id) const { return array_gain_[id]; }
  std::uint64_t clamp_count() const { return clamps_; }
  const LinkTableConfig& config() const { return config_; }

 private:
  bool refresh_pair(std::size_t idx, const scenario::Scene& scene,
                    const std::vector<scenario::BusBox>& boxes, SlotIndex slot);
  void refresh_fading(std::size_t idx, std::int64_t block);

  LinkTableConfig config_;
  std::size_t n_ = 0;
  std::vector<NodeId> pa_, pb_;
  std::vector<PairRecord> pairs_;
  std::vector<double> coupling_;
  std::vector<double> array_gain_;
  std::uint64_t clamps_ = 0;
};

}  // namespace miab::channel
