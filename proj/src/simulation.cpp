#include "miab/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace miab::sim {

using frame::Role;
using metrics::LinkCategory;
using scenario::NodeKind;

std::size_t generate_traffic(SlotIndex slot, std::span<Flow> flows, std::uint64_t& next_id) {
  if (slot % kPacketIntervalSlots != 0) return 0;
  for (auto& f : flows) {
    f.stage[0].push_back(Packet{next_id++, slot, kPacketBits, -1});
    f.generated_bits += kPacketBits;
  }
  return flows.size();
}

std::vector<std::pair<int, int>> split_round_robin(int n, int rotation, int n_rbs,
                                                   std::span<const int> demand) {
  std::vector<std::pair<int, int>> out(static_cast<std::size_t>(std::max(n, 0)), {0, 0});
  if (n <= 0) return out;
  const int start = rotation % n;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = (start + k) % n;

  // even share of `pool` over the citizens in `who`, extras to the earliest
  auto share = [](std::vector<int>& width, const std::vector<int>& who, int pool) {
    if (who.empty() || pool <= 0) return;
    const int m = static_cast<int>(who.size());
    for (int k = 0; k < m; ++k) width[static_cast<std::size_t>(who[static_cast<std::size_t>(k)])] +=
        pool / m + (k < pool % m ? 1 : 0);
  };

  std::vector<int> width(static_cast<std::size_t>(n), 0);
  if (demand.empty()) {
    share(width, order, n_rbs);
  } else {
    std::vector<int> open = order;
    int pool = n_rbs;
    bool settled = true;
    while (settled && !open.empty()) {
      settled = false;
      const int fair = pool / static_cast<int>(open.size());
      std::vector<int> rest;
      for (int i : open) {
        const int want = std::max(demand[static_cast<std::size_t>(i)], 1);
        if (want <= fair) {
          width[static_cast<std::size_t>(i)] = want;
          pool -= want;
          settled = true;
        } else {
          rest.push_back(i);
        }
      }
      open = std::move(rest);
    }
    share(width, open.empty() ? order : open, pool);
  }

  int rb = 0;
  for (int i : order) {
    auto w = static_cast<std::size_t>(i);
    out[w] = {rb, rb + width[w]};
    rb += width[w];
  }
  return out;
}

namespace {

channel::LinkTableConfig link_config(const SimConfig& c) {
  channel::LinkTableConfig lc;
  lc.seed = c.seed;
  lc.fading = c.fading;
  lc.refresh_slots = c.channel_refresh_slots;
  lc.refresh_distance_m = c.channel_refresh_distance_m;
  lc.fading_block_slots = c.fading_block_slots;
  return lc;
}

const SimConfig& checked(const SimConfig& c) {
  validate(c);
  return c;
}

}  // namespace

Simulation::Simulation(SimConfig config)
    : cfg_(checked(config)),
      pattern_(resolve_pattern(cfg_)),
      mcs_(cfg_.mcs_table.empty() ? radio::default_mcs_table() : radio::load_mcs_table(cfg_.mcs_table)),
      scene_(scenario::build_scene(cfg_.regime, cfg_.deployment, cfg_.seed, cfg_.counts, cfg_.sites)),
      links_(scene_, link_config(cfg_)),
      streams_(cfg_.seed, scene_.buses.size(), scene_.pedestrian_nodes.size()),
      exec_(cfg_.parallel ? channel::Exec::Parallel : channel::Exec::Serial),
      hist_(mcs_.size()) {
  const std::size_t n = scene_.nodes.size();
  ue_index_.assign(n, -1);
  serving_.assign(n, kNoNode);
  direct_ues_.resize(n);
  donor_buses_.resize(n);
  relay_ues_.resize(scene_.buses.size());
  rr_.assign(n, 0);
  adapt_.resize(n * n);
  for (const auto& node : scene_.nodes) {
    if (scenario::is_ue(node.kind)) {
      ue_index_[node.id] = static_cast<int>(ues_.size());
      ues_.push_back(node.id);
    }
    if (scenario::is_cell(node.kind)) cells_.push_back(node.id);
  }
  for (auto u : ues_) {
    Flow d;
    d.ue = u;
    d.dir = Dir::Dl;
    Flow up = d;
    up.dir = Dir::Ul;
    flows_.push_back(std::move(d));
    flows_.push_back(std::move(up));
    metrics::UeStats s;
    s.id = u;
    s.cls = scene_.nodes[u].kind == NodeKind::PassengerUe ? metrics::UeClass::Passenger
                                                          : metrics::UeClass::Pedestrian;
    stats_.push_back(std::move(s));
  }
}

std::optional<NodeId> Simulation::serving(NodeId node) const {
  if (serving_[node] == kNoNode) return std::nullopt;
  return serving_[node];
}

void Simulation::set_trace(std::ostream* out, int every_slots) {
  trace_ = out;
  trace_every_ = std::max(1, every_slots);
  if (trace_) *trace_ << "slot,entity,x,y,heading\n";
}

void Simulation::write_trace() {
  for (const auto& bus : scene_.buses)
    *trace_ << slot_ << ",bus" << bus.id << ',' << bus.motion.x << ',' << bus.motion.y << ','
            << scenario::heading_name(bus.motion.heading) << '\n';
  for (std::size_t i = 0; i < scene_.pedestrian_nodes.size(); ++i) {
    const auto& m = scene_.pedestrian_motion[i];
    *trace_ << slot_ << ",ped" << scene_.pedestrian_nodes[i] << ',' << m.x << ',' << m.y << ','
            << scenario::heading_name(m.heading) << '\n';
  }
}

void Simulation::rehome(Flow& f, const Route& route) {
  if (f.route == route) return;
  // undelivered packets restart from the source on the new path
  while (!f.stage[1].empty()) {
    f.stage[0].push_front(f.stage[1].back());
    f.stage[1].pop_back();
  }
  for (auto& p : f.stage[0]) {
    p.remaining_bits = kPacketBits;
    p.relay_slot = -1;
  }
  f.route = route;
}

void Simulation::refresh_topology() {
  const auto macros = scene_.nodes_of(NodeKind::MacroGnb);
  auto rsrp = [&](NodeId cell, NodeId peer) {
    return radio::rsrp_dbm(scene_.nodes[cell].tx_power_dbm,
                           links_.gain_db(cell, peer, true, false));
  };
  auto choose = [&](NodeId node, const std::vector<NodeId>& cands) {
    std::vector<radio::Candidate> list;
    list.reserve(cands.size());
    for (auto c : cands) list.push_back({c, rsrp(c, node)});
    std::optional<std::uint32_t> cur;
    if (serving_[node] != kNoNode) cur = serving_[node];
    auto next = radio::attach(cur, list, cfg_.hysteresis_db);
    NodeId chosen = next ? *next : kNoNode;
    if (serving_[node] != kNoNode && chosen != serving_[node]) ++handovers_;
    serving_[node] = chosen;
  };

  for (const auto& bus : scene_.buses)
    if (bus.mt != kNoNode) choose(bus.mt, macros);

  std::vector<NodeId> ue_cands;
  for (auto c : cells_) {
    const auto& node = scene_.nodes[c];
    if (node.kind == NodeKind::MiabDu && serving_[scene_.buses[node.bus].mt] == kNoNode) continue;
    ue_cands.push_back(c);
  }
  for (auto u : ues_) choose(u, ue_cands);

  for (auto& v : direct_ues_) v.clear();
  for (auto& v : donor_buses_) v.clear();
  for (auto& v : relay_ues_) v.clear();
  for (const auto& bus : scene_.buses)
    if (bus.mt != kNoNode && serving_[bus.mt] != kNoNode) donor_buses_[serving_[bus.mt]].push_back(bus.id);

  for (std::size_t i = 0; i < ues_.size(); ++i) {
    const NodeId u = ues_[i];
    Route r;
    r.cell = serving_[u];
    if (r.cell != kNoNode) {
      const auto& cell = scene_.nodes[r.cell];
      if (cell.kind == NodeKind::MiabDu) {
        r.bus = cell.bus;
        r.donor = serving_[scene_.buses[cell.bus].mt];
        relay_ues_[cell.bus].push_back(static_cast<int>(i));
      } else {
        direct_ues_[r.cell].push_back(static_cast<int>(i));
      }
    }
    rehome(dl(static_cast<int>(i)), r);
    rehome(ul(static_cast<int>(i)), r);
  }
}

std::int64_t Simulation::consume(std::deque<Packet>& q, std::int64_t bits, std::vector<Packet>& done) {
  std::int64_t used = 0;
  while (bits > 0 && !q.empty()) {
    auto& p = q.front();
    auto take = std::min<std::int64_t>(bits, p.remaining_bits);
    p.remaining_bits -= static_cast<int>(take);
    bits -= take;
    used += take;
    if (p.remaining_bits == 0) {
      done.push_back(p);
      q.pop_front();
    }
  }
  return used;
}

std::int64_t Simulation::consume_bus(BusId bus, Dir dir, int stage, std::int64_t bits,
                                     std::vector<std::pair<int, Packet>>& done) {
  std::int64_t used = 0;
  const auto& members = relay_ues_[bus];
  while (bits > 0) {
    // oldest head-of-line packet across the bus's flows
    Flow* best = nullptr;
    int best_ue = -1;
    for (int u : members) {
      Flow& f = dir == Dir::Dl ? dl(u) : ul(u);
      if (f.stage[stage].empty()) continue;
      if (!best || f.stage[stage].front().created < best->stage[stage].front().created) {
        best = &f;
        best_ue = u;
      }
    }
    if (!best) break;
    auto& p = best->stage[stage].front();
    auto take = std::min<std::int64_t>(bits, p.remaining_bits);
    p.remaining_bits -= static_cast<int>(take);
    bits -= take;
    used += take;
    if (p.remaining_bits == 0) {
      done.emplace_back(best_ue, p);
      best->stage[stage].pop_front();
    }
  }
  return used;
}

void Simulation::deliver(int flow_index, const Packet& p) {
  Flow& f = flows_[static_cast<std::size_t>(flow_index)];
  f.delivered_bits += kPacketBits;
  auto& s = stats_[static_cast<std::size_t>(flow_index / 2)];
  if (f.dir == Dir::Dl) {
    s.dl_delivered_bits += kPacketBits;
    s.dl_latency_slots.push_back(static_cast<std::int32_t>(slot_ - p.created));
  } else {
    s.ul_delivered_bits += kPacketBits;
  }
  if (cfg_.record_deliveries)
    deliveries_.push_back({f.ue, f.dir, p.created, p.relay_slot, slot_});
}

std::int64_t Simulation::queued_bits(const Citizen& who, bool downlink, NodeKind cell) const {
  auto sum = [](const std::deque<Packet>& q) {
    std::int64_t bits = 0;
    for (const auto& p : q) bits += p.remaining_bits;
    return bits;
  };
  if (who.ue >= 0) {
    const Flow& f = downlink ? dl(who.ue) : ul(who.ue);
    return sum(f.stage[downlink && cell == NodeKind::MiabDu ? 1 : 0]);
  }
  std::int64_t bits = 0;
  for (int u : relay_ues_[who.bus]) bits += downlink ? sum(dl(u).stage[0]) : sum(ul(u).stage[1]);
  return bits;
}

int Simulation::rbs_for(std::int64_t bits, int mcs) const {
  const double per_rb = kSubcarriersPerRb * kSymbolsPerSlot * mcs_[static_cast<std::size_t>(mcs)].spectral_efficiency;
  int n = static_cast<int>(std::ceil(static_cast<double>(bits) / per_rb));
  n = std::clamp(n, 1, kNumRbs);
  while (n < kNumRbs && radio::transport_block_bits(n, mcs, mcs_) < bits) ++n;
  return n;
}

void Simulation::schedule_and_transmit() {
  const bool miab = pattern_.has_miab_rows();
  const auto d_access = pattern_.at(Role::DonorAccess, slot_);
  const auto d_backhaul = miab ? pattern_.at(Role::Backhaul, slot_) : frame::SlotDirection::Silent;
  const auto d_du = miab ? pattern_.at(Role::MiabAccess, slot_) : frame::SlotDirection::Silent;

  struct Pending {
    TxRecord rec;
    Citizen who;
    kernels::Transmission tx;
  };
  std::vector<Pending> plan;
  std::vector<Citizen> citizens;

  for (NodeId c : cells_) {
    citizens.clear();
    const auto& cell = scene_.nodes[c];
    bool downlink = false;
    Role access_role = Role::DonorAccess;
    if (cell.kind == NodeKind::MiabDu) {
      access_role = Role::MiabAccess;
      if (!frame::is_active(d_du)) continue;
      downlink = frame::is_downlink(d_du);
      for (int u : relay_ues_[cell.bus]) {
        const Flow& f = downlink ? dl(u) : ul(u);
        if (!f.stage[downlink ? 1 : 0].empty()) citizens.push_back({ues_[u], kNoBus, u});
      }
    } else {
      const bool access_on = frame::is_active(d_access);
      const bool backhaul_on = frame::is_active(d_backhaul) && !donor_buses_[c].empty();
      if (!access_on && !backhaul_on) continue;
      downlink = access_on ? frame::is_downlink(d_access) : frame::is_downlink(d_backhaul);
      if (access_on) {
        for (int u : direct_ues_[c]) {
          const Flow& f = downlink ? dl(u) : ul(u);
          if (!f.stage[0].empty()) citizens.push_back({ues_[u], kNoBus, u});
        }
      }
      if (backhaul_on) {
        for (BusId b : donor_buses_[c]) {
          bool backlog = false;
          for (int u : relay_ues_[b]) {
            const Flow& f = downlink ? dl(u) : ul(u);
            if (!f.stage[downlink ? 0 : 1].empty()) {
              backlog = true;
              break;
            }
          }
          if (backlog) citizens.push_back({scene_.buses[b].mt, b, -1});
        }
      }
    }
    if (citizens.empty()) continue;

    const int n = static_cast<int>(citizens.size());
    std::vector<Pending> mine(static_cast<std::size_t>(n));
    std::vector<int> demand(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& who = citizens[static_cast<std::size_t>(i)];
      const bool backhaul = who.ue < 0;
      auto& p = mine[static_cast<std::size_t>(i)];
      p.who = who;
      p.rec.tx = downlink ? c : who.peer;
      p.rec.rx = downlink ? who.peer : c;
      p.rec.role = backhaul ? Role::Backhaul : access_role;
      p.rec.dir = downlink ? Dir::Dl : Dir::Ul;
      p.rec.category = backhaul ? (downlink ? LinkCategory::BackhaulDl : LinkCategory::BackhaulUl)
                                : (downlink ? LinkCategory::AccessDl : LinkCategory::AccessUl);
      p.tx.tx = p.rec.tx;
      p.tx.rx = p.rec.rx;
      p.tx.power_re_mw = db_to_linear(radio::per_re_power_dbm(scene_.nodes[p.rec.tx].tx_power_dbm));
      p.tx.signal_gain = db_to_linear(links_.gain_db(p.rec.tx, p.rec.rx, true));

      const auto& la = adapt_[p.rec.tx * scene_.nodes.size() + p.rec.rx];
      double estimate = la.measured
                            ? la.last_sinr_db
                            : linear_to_db(p.tx.power_re_mw * p.tx.signal_gain) -
                                  radio::noise_dbm(1);
      p.rec.mcs = radio::select_mcs(estimate, la.olla, mcs_);
      demand[static_cast<std::size_t>(i)] = rbs_for(queued_bits(who, downlink, cell.kind), p.rec.mcs);
    }

    auto grants = split_round_robin(n, static_cast<int>(rr_[c] % static_cast<std::uint64_t>(n)),
                                    kNumRbs, demand);
    ++rr_[c];
    for (int i = 0; i < n; ++i) {
      auto [b0, b1] = grants[static_cast<std::size_t>(i)];
      if (b1 <= b0) continue;
      auto& p = mine[static_cast<std::size_t>(i)];
      p.rec.rb_begin = p.tx.rb_begin = b0;
      p.rec.rb_end = p.tx.rb_end = b1;
      p.rec.tb_bits = radio::transport_block_bits(b1 - b0, p.rec.mcs, mcs_);
      plan.push_back(p);
    }
  }

  std::vector<kernels::Transmission> txs;
  txs.reserve(plan.size());
  for (const auto& p : plan) txs.push_back(p.tx);
  auto sinr = kernels::evaluate_sinr(txs, links_, exec_);

  last_tx_.clear();
  forward_.clear();
  std::vector<Packet> done;
  std::vector<std::pair<int, Packet>> done_bus;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    auto& p = plan[i];
    p.rec.sinr_db = sinr[i].sinr_db;
    p.rec.ok = sinr[i].sinr_db >= mcs_[static_cast<std::size_t>(p.rec.mcs)].min_sinr_db;
    auto& la = adapt_[p.rec.tx * scene_.nodes.size() + p.rec.rx];
    la.olla = radio::olla_update(la.olla, p.rec.ok, cfg_.olla);
    la.last_sinr_db = std::max(sinr[i].sinr_db, -50.0);
    la.measured = true;

    const auto cat = static_cast<std::size_t>(p.rec.category);
    hist_.add(p.rec.category, p.rec.mcs);
    ++tx_count_[cat];
    if (!p.rec.ok) ++err_count_[cat];
    last_tx_.push_back(p.rec);
    if (!p.rec.ok) continue;

    const bool down = p.rec.dir == Dir::Dl;
    if (p.who.ue >= 0) {
      const int u = p.who.ue;
      const int fi = 2 * u + (down ? 0 : 1);
      Flow& f = flows_[static_cast<std::size_t>(fi)];
      done.clear();
      if (down) {
        // DU access serves relayed packets; a base station serves the source queue
        const int stage = f.route.relayed() ? 1 : 0;
        consume(f.stage[stage], p.rec.tb_bits, done);
        for (const auto& pk : done) deliver(fi, pk);
      } else {
        consume(f.stage[0], p.rec.tb_bits, done);
        for (const auto& pk : done) {
          if (f.route.relayed()) {
            Packet fwd = pk;
            fwd.remaining_bits = kPacketBits;
            fwd.relay_slot = slot_;
            forward_.emplace_back(fi, fwd);
          } else {
            deliver(fi, pk);
          }
        }
      }
    } else {
      done_bus.clear();
      consume_bus(p.who.bus, down ? Dir::Dl : Dir::Ul, down ? 0 : 1, p.rec.tb_bits, done_bus);
      for (auto& [u, pk] : done_bus) {
        const int fi = 2 * u + (down ? 0 : 1);
        if (down) {
          Packet fwd = pk;
          fwd.remaining_bits = kPacketBits;
          fwd.relay_slot = slot_;
          forward_.emplace_back(fi, fwd);
        } else {
          deliver(fi, pk);
        }
      }
    }
  }
  for (auto& [fi, pk] : forward_) flows_[static_cast<std::size_t>(fi)].stage[1].push_back(pk);
}

void Simulation::step() {
  if (slot_ > 0) mobility::advance_scene(scene_, kSlotSeconds, streams_, exec_ == channel::Exec::Parallel);
  links_.update(scene_, slot_, exec_);
  if (slot_ % cfg_.topology_refresh_slots == 0) refresh_topology();

  std::span<Flow> all(flows_);
  if (slot_ % kPacketIntervalSlots == 0) {
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      if (flows_[i].dir == Dir::Ul && !cfg_.ul_flows) continue;
      generate_traffic(slot_, all.subspan(i, 1), next_packet_id_);
      auto& s = stats_[i / 2];
      if (flows_[i].dir == Dir::Dl) s.dl_generated_bits += kPacketBits;
      else s.ul_generated_bits += kPacketBits;
    }
  }
  for (std::size_t u = 0; u < ues_.size(); ++u)
    if (dl(static_cast<int>(u)).backlogged()) ++stats_[u].dl_active_slots;

  schedule_and_transmit();
  if (trace_ && slot_ % trace_every_ == 0) write_trace();
  ++slot_;
}

void Simulation::run_until(SlotIndex end_slot) {
  while (slot_ < end_slot) step();
}

metrics::MetricsBundle Simulation::bundle() const {
  metrics::MetricsBundle b;
  b.config_hash = config_hash(cfg_);
  b.seed = cfg_.seed;
  b.config_text = to_text(cfg_);
  b.slots = slot_;
  b.ues = stats_;
  for (std::size_t u = 0; u < ues_.size(); ++u) {
    const Flow& f = dl(static_cast<int>(u));
    for (int s = 0; s < 2; ++s)
      for (const auto& p : f.stage[s])
        b.ues[u].dl_pending_age_slots.push_back(static_cast<std::int32_t>(slot_ - p.created));
  }
  b.mcs = hist_;
  b.transmissions = tx_count_;
  b.errors = err_count_;
  b.handovers = handovers_;
  b.path_loss_clamps = static_cast<std::int64_t>(links_.clamp_count());
  return b;
}

metrics::MetricsBundle run(const SimConfig& config) {
  Simulation sim(config);
  sim.run_until(config.num_slots());
  return sim.bundle();
}

}  // namespace miab::sim
