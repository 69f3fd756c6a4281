#include "miab/link_table.hpp"

#include <algorithm>
#include <cmath>

namespace miab::channel {

LinkTable::LinkTable(const scenario::Scene& scene, const LinkTableConfig& config)
    : config_(config), n_(scene.nodes.size()) {
  if (config_.refresh_slots < 1 || config_.fading_block_slots < 1)
    throw ConfigError("channel refresh periods must be positive");
  const std::size_t np = n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2;
  pa_.reserve(np);
  pb_.reserve(np);
  for (NodeId a = 0; a < n_; ++a)
    for (NodeId b = a + 1; b < n_; ++b) {
      pa_.push_back(a);
      pb_.push_back(b);
    }
  pairs_.resize(pa_.size());
  coupling_.assign(pa_.size(), 0.0);
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    auto rng = substream(config_.seed, "los", {i});
    pairs_[i].los_draw = uniform01(rng);
  }
  array_gain_.resize(n_);
  for (const auto& node : scene.nodes) array_gain_[node.id] = channel::array_gain_db(node.antenna);
}

std::size_t LinkTable::pair_index(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  // row a starts after the rows of all smaller ids
  const std::size_t row = static_cast<std::size_t>(a) * (2 * n_ - a - 1) / 2;
  return row + (b - a - 1);
}

bool LinkTable::refresh_pair(std::size_t idx, const scenario::Scene& scene,
                             const std::vector<scenario::BusBox>& boxes, SlotIndex slot) {
  auto& rec = pairs_[idx];
  const auto& a = scene.nodes[pa_[idx]];
  const auto& b = scene.nodes[pb_[idx]];
  const Vec3 rel = b.position - a.position;
  const bool first = rec.last_refresh < 0;
  if (!first && slot - rec.last_refresh < config_.refresh_slots &&
      (rel - rec.rel_at_refresh).norm() <= config_.refresh_distance_m)
    return false;

  auto& st = rec.state;
  const double moved = first ? 0.0 : (rel - rec.rel_at_refresh).norm();
  st.cls = classify(a, b, boxes);
  rec.d2d_m = rel.norm2d();
  rec.d3d_m = rel.norm();
  const double h_bs = std::max(a.position.z, b.position.z);
  const double h_ut = std::min(a.position.z, b.position.z);
  st.los = los_state(st.cls, rec.los_draw, rec.d2d_m, h_ut);

  if (first) {
    auto init = substream(config_.seed, "shadowing.init", {idx});
    rec.shadow = ShadowingProcess(init);
  } else {
    auto step = substream(config_.seed, "shadowing", {idx, rec.epoch});
    rec.shadow.advance(moved, st.cls.scenario, st.los, step);
  }
  ++rec.epoch;
  st.shadowing_db = rec.shadow.value_db(st.cls.scenario, st.los);

  auto pl = path_loss(st.cls.scenario, st.los, rec.d2d_m, h_bs, h_ut, config_.fc_ghz);
  st.path_loss_db = pl.db;
  st.penetration_db = kPenetrationLossDb * st.cls.penetration_count;
  st.tx_gain_db = element_gain_db(a.antenna, rel);
  st.rx_gain_db = element_gain_db(b.antenna, -1.0 * rel);

  rec.rel_at_refresh = rel;
  rec.last_refresh = slot;
  return pl.clamped;
}

void LinkTable::refresh_fading(std::size_t idx, std::int64_t block) {
  auto& rec = pairs_[idx];
  if (rec.fading_block == block) return;
  rec.fading_block = block;
  if (config_.fading) {
    auto rng = substream(config_.seed, "fading", {idx, static_cast<std::uint64_t>(block)});
    rec.state.fading_db = fading_loss_db(rec.state.los, rng);
  } else {
    rec.state.fading_db = 0.0;
  }
  const auto& st = rec.state;
  coupling_[idx] = db_to_linear(st.tx_gain_db + st.rx_gain_db - st.propagation_loss_db());
}

std::size_t LinkTable::update(const scenario::Scene& scene, SlotIndex slot, Exec exec) {
  if (scene.nodes.size() != n_) throw ConfigError("scene node count changed under the link table");
  std::vector<scenario::BusBox> boxes;
  boxes.reserve(scene.buses.size());
  for (const auto& bus : scene.buses) boxes.push_back(scenario::BusBox::of(bus));
  const std::int64_t block = slot / config_.fading_block_slots;
  const auto np = static_cast<std::ptrdiff_t>(pairs_.size());

  std::size_t refreshed = 0;
  std::uint64_t clamps = 0;
  auto body = [&](std::ptrdiff_t i, std::size_t& r, std::uint64_t& c) {
    auto before = pairs_[i].last_refresh;
    if (refresh_pair(static_cast<std::size_t>(i), scene, boxes, slot)) ++c;
    if (pairs_[i].last_refresh != before) {
      ++r;
      // same block draw, re-derived for a possibly changed LOS state
      pairs_[i].fading_block = -1;
    }
    refresh_fading(static_cast<std::size_t>(i), block);
  };

  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < np; ++i) body(i, refreshed, clamps);
  } else {
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : refreshed, clamps)
    for (std::ptrdiff_t i = 0; i < np; ++i) body(i, refreshed, clamps);
  }
  clamps_ += clamps;
  return refreshed;
}

LinkState LinkTable::link(NodeId tx, NodeId rx, bool serving) const {
  const auto& rec = pairs_[pair_index(tx, rx)];
  LinkState s = rec.state;
  if (tx > rx) std::swap(s.tx_gain_db, s.rx_gain_db);
  if (serving) {
    s.tx_gain_db += array_gain_[tx];
    s.rx_gain_db += array_gain_[rx];
  }
  return s;
}

double LinkTable::gain_db(NodeId tx, NodeId rx, bool serving, bool with_fading) const {
  auto s = link(tx, rx, serving);
  double g = s.tx_gain_db + s.rx_gain_db - s.propagation_loss_db();
  if (!with_fading) g += s.fading_db;
  return g;
}

}  // namespace miab::channel
