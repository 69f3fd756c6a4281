#include "miab/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace miab::mobility {

using scenario::GridLayout;
using scenario::Heading;

Turn sample_turn(SplitMix64& rng, TurnOptions options) {
  std::array<double, 3> w{options.straight ? kTurnProbabilities[0] : 0.0,
                          options.left ? kTurnProbabilities[1] : 0.0,
                          options.right ? kTurnProbabilities[2] : 0.0};
  double total = w[0] + w[1] + w[2];
  if (total <= 0.0) throw TopologyError("no valid direction at intersection");
  double u = uniform01(rng) * total;
  if (u < w[0]) return Turn::Straight;
  if (u < w[0] + w[1]) return Turn::Left;
  return w[2] > 0.0 ? Turn::Right : Turn::Left;
}

namespace {

constexpr double kEps = 1e-9;

Heading apply(Heading h, Turn t) {
  switch (t) {
    case Turn::Straight: return h;
    case Turn::Left: return scenario::turn_left(h);
    case Turn::Right: return scenario::turn_right(h);
  }
  return h;
}

void set_along(MobileState& s, double v) {
  if (scenario::moves_along_x(s.heading)) s.x = v; else s.y = v;
}

// Street band index k whose near edge is the next one ahead along the travel
// axis; returns the edge coordinate, or NaN when no band is ahead.
double next_band_entry(const GridLayout& layout, double a, double sign, int& band) {
  const int last = layout.blocks_per_side();
  if (sign > 0) {
    for (int k = 0; k <= last; ++k) {
      double e = GridLayout::street_start(k);
      if (e > a + kEps) { band = k; return e; }
    }
  } else {
    for (int k = last; k >= 0; --k) {
      double e = GridLayout::street_start(k) + GridLayout::kStreetWidth;
      if (e < a - kEps) { band = k; return e; }
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double next_line(const std::vector<double>& lines, double a, double sign) {
  if (sign > 0) {
    for (double v : lines)
      if (v > a + kEps) return v;
  } else {
    for (auto it = lines.rbegin(); it != lines.rend(); ++it)
      if (*it < a - kEps) return *it;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool has_line_beyond(const std::vector<double>& lines, double a, double sign) {
  return !std::isnan(next_line(lines, a, sign));
}

TurnOptions vehicle_options(const GridLayout& layout, const MobileState& s, int band) {
  const int last = layout.blocks_per_side();
  int cross = layout.street_at(s.lateral());
  if (cross < 0) throw TopologyError("vehicle is not on a street");
  auto road_beyond = [&](Heading h, int idx) {
    return scenario::heading_sign(h) > 0 ? idx < last : idx > 0;
  };
  return {road_beyond(s.heading, band), road_beyond(scenario::turn_left(s.heading), cross),
          road_beyond(scenario::turn_right(s.heading), cross)};
}

TurnOptions walker_options(const std::vector<double>& lines, const MobileState& s, double point) {
  auto beyond = [&](Heading h, double from) {
    return has_line_beyond(lines, from, scenario::heading_sign(h));
  };
  return {beyond(s.heading, point), beyond(scenario::turn_left(s.heading), s.lateral()),
          beyond(scenario::turn_right(s.heading), s.lateral())};
}

}  // namespace

MobileState step(const MobileState& entity, double dt_s, const GridLayout& layout,
                 SplitMix64& rng, TurnObserver* observer) {
  MobileState s = entity;
  double remaining = s.speed_mps * dt_s;
  if (remaining <= 0.0) return s;
  const auto& lines = layout.walk_lines();

  for (int guard = 0; remaining > 0.0; ++guard) {
    if (guard > 100000) throw TopologyError("mobility step did not converge");
    const double a = s.along();
    const double sign = scenario::heading_sign(s.heading);

    if (s.pending) {
      double dist = (s.pending->at - a) * sign;
      if (dist < -kEps) throw TopologyError("missed pending turn");
      dist = std::max(dist, 0.0);
      if (dist > remaining) { set_along(s, a + sign * remaining); break; }
      set_along(s, s.pending->at);
      remaining -= dist;
      s.heading = s.pending->to;
      s.lane = 0;
      s.pending.reset();
      continue;
    }

    if (s.mover == Mover::Vehicle) {
      int band = -1;
      double entry = next_band_entry(layout, a, sign, band);
      if (std::isnan(entry)) throw TopologyError("vehicle drove off the street grid");
      double dist = (entry - a) * sign;
      if (dist > remaining) { set_along(s, a + sign * remaining); break; }
      set_along(s, entry);
      remaining -= dist;
      auto options = vehicle_options(layout, s, band);
      Turn t = sample_turn(rng, options);
      if (observer) observer->on_turn(s, options, t);
      if (t != Turn::Straight) {
        Heading to = apply(s.heading, t);
        double at = GridLayout::street_start(band) + GridLayout::lane_offset(to, 0);
        s.pending = PendingTurn{at, to};
      }
    } else {
      double point = next_line(lines, a, sign);
      if (std::isnan(point)) throw TopologyError("pedestrian walked off the sidewalk grid");
      double dist = (point - a) * sign;
      if (dist > remaining) { set_along(s, a + sign * remaining); break; }
      set_along(s, point);
      remaining -= dist;
      auto options = walker_options(lines, s, point);
      Turn t = sample_turn(rng, options);
      if (observer) observer->on_turn(s, options, t);
      s.heading = apply(s.heading, t);
    }
  }
  return s;
}

bool on_network(const MobileState& s, const GridLayout& layout) {
  if (s.mover == Mover::Vehicle) return layout.drivable(s.x, s.y);
  return layout.walkable(s.x, s.y);
}

void sync_riders(const scenario::Bus& bus, std::vector<scenario::NetworkNode>& nodes) {
  scenario::place_riders(bus, nodes);
}

MobilityStreams::MobilityStreams(std::uint64_t seed, std::size_t buses, std::size_t pedestrians)
    : buses_(buses) {
  streams_.reserve(buses + pedestrians);
  for (std::size_t i = 0; i < buses; ++i) streams_.push_back(substream(seed, "mobility.bus", {i}));
  for (std::size_t i = 0; i < pedestrians; ++i)
    streams_.push_back(substream(seed, "mobility.pedestrian", {i}));
}

void advance_scene(scenario::Scene& scene, double dt_s, MobilityStreams& streams, bool parallel) {
  const auto nb = static_cast<std::ptrdiff_t>(scene.buses.size());
  const auto np = static_cast<std::ptrdiff_t>(scene.pedestrian_nodes.size());
  auto move_bus = [&](std::ptrdiff_t i) {
    auto& bus = scene.buses[i];
    bus.motion = step(bus.motion, dt_s, scene.layout, streams.bus(i));
    sync_riders(bus, scene.nodes);
  };
  auto move_pedestrian = [&](std::ptrdiff_t i) {
    auto& m = scene.pedestrian_motion[i];
    m = step(m, dt_s, scene.layout, streams.pedestrian(i));
    auto& node = scene.nodes[scene.pedestrian_nodes[i]];
    node.position.x = m.x;
    node.position.y = m.y;
  };
  if (!parallel) {
    for (std::ptrdiff_t i = 0; i < nb; ++i) move_bus(i);
    for (std::ptrdiff_t i = 0; i < np; ++i) move_pedestrian(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nb; ++i) move_bus(i);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < np; ++i) move_pedestrian(i);
}

}  // namespace miab::mobility
