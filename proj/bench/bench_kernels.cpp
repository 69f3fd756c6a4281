// Serial vs OpenMP timings for the two hot kernels: slot SINR evaluation and
// the pairwise channel refresh.
#include <benchmark/benchmark.h>

#include "miab/kernels.hpp"
#include "miab/mobility.hpp"

namespace {

using namespace miab;

scenario::Scene make_scene() {
  return scenario::build_scene(scenario::Regime::NotLimited, scenario::Deployment::Miab, 1);
}

channel::LinkTableConfig every_slot() {
  channel::LinkTableConfig c;
  c.refresh_slots = 1;
  return c;
}

// One transmission per UE link plus every MT, all on overlapping RBs.
std::vector<kernels::Transmission> busy_slot(const scenario::Scene& s, const channel::LinkTable& lt, int copies) {
  std::vector<kernels::Transmission> out;
  const auto macros = s.nodes_of(scenario::NodeKind::MacroGnb);
  for (int k = 0; k < copies; ++k)
    for (const auto& n : s.nodes) {
      if (!scenario::is_ue(n.kind) && n.kind != scenario::NodeKind::MiabMt) continue;
      NodeId cell = n.bus != kNoBus && n.kind == scenario::NodeKind::PassengerUe ? s.buses[n.bus].du
                                                                                  : macros[n.id % macros.size()];
      int b0 = static_cast<int>((n.id * 7 + k) % 50);
      out.push_back({cell, n.id, b0, b0 + 16, db_to_linear(radio::per_re_power_dbm(s.node(cell).tx_power_dbm)),
                     db_to_linear(lt.gain_db(cell, n.id, true))});
    }
  return out;
}

void sinr(benchmark::State& st, channel::Exec exec) {
  auto scene = make_scene();
  channel::LinkTable lt(scene, {});
  lt.update(scene, 0);
  auto txs = busy_slot(scene, lt, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::evaluate_sinr(txs, lt, exec));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(txs.size()));
}

void sinr_reference(benchmark::State& st) {
  auto scene = make_scene();
  channel::LinkTable lt(scene, {});
  lt.update(scene, 0);
  auto txs = busy_slot(scene, lt, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::evaluate_sinr_reference(txs, lt));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(txs.size()));
}

void refresh(benchmark::State& st, channel::Exec exec) {
  auto scene = make_scene();
  channel::LinkTable lt(scene, every_slot());
  mobility::MobilityStreams streams(1, scene.buses.size(), scene.pedestrian_nodes.size());
  SlotIndex slot = 0;
  for (auto _ : st) {
    mobility::advance_scene(scene, kSlotSeconds, streams);
    benchmark::DoNotOptimize(lt.update(scene, slot++, exec));
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(lt.num_pairs()));
}

BENCHMARK_CAPTURE(sinr, serial, channel::Exec::Serial)->Arg(1)->Arg(4);
BENCHMARK_CAPTURE(sinr, parallel, channel::Exec::Parallel)->Arg(1)->Arg(4);
BENCHMARK(sinr_reference)->Arg(1)->Arg(4);
BENCHMARK_CAPTURE(refresh, serial, channel::Exec::Serial);
BENCHMARK_CAPTURE(refresh, parallel, channel::Exec::Parallel);

}  // namespace

BENCHMARK_MAIN();
