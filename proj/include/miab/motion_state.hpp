#pragma once

#include <optional>

#include "miab/layout.hpp"

namespace miab::mobility {

enum class Mover : std::uint8_t { Vehicle, Walker };

struct PendingTurn {
  double at = 0.0;  // coordinate along the current travel axis
  scenario::Heading to = scenario::Heading::East;
  friend bool operator==(const PendingTurn&, const PendingTurn&) = default;
};

/// Planar pose of a moving entity. Vehicles follow lane centerlines,
/// walkers follow sidewalk centerlines; both only change heading at
/// intersections.
struct MobileState {
  Mover mover = Mover::Walker;
  double x = 0.0;
  double y = 0.0;
  scenario::Heading heading = scenario::Heading::East;
  double speed_mps = 0.0;
  int lane = 0;
  std::optional<PendingTurn> pending;

  double along() const { return scenario::moves_along_x(heading) ? x : y; }
  double lateral() const { return scenario::moves_along_x(heading) ? y : x; }

  friend bool operator==(const MobileState&, const MobileState&) = default;
};

inline constexpr double kmh_to_mps(double kmh) { return kmh / 3.6; }

}  // namespace miab::mobility
