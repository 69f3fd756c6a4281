#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "miab/common.hpp"

namespace miab::scenario {

enum class Regime : std::uint8_t { NotLimited, Limited };
std::string_view regime_name(Regime r);
Regime parse_regime(std::string_view s);

/// Axis-aligned heading on the street grid.
enum class Heading : std::uint8_t { East, North, West, South };

constexpr Heading turn_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }
constexpr Heading turn_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
constexpr double heading_degrees(Heading h) { return 90.0 * static_cast<int>(h); }
constexpr bool moves_along_x(Heading h) { return h == Heading::East || h == Heading::West; }
constexpr double heading_sign(Heading h) {
  return (h == Heading::East || h == Heading::North) ? 1.0 : -1.0;
}
std::string_view heading_name(Heading h);

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(double x, double y, double eps = 1e-9) const {
    return x >= x0 - eps && x <= x1 + eps && y >= y0 - eps && y <= y1 + eps;
  }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Manhattan grid of square blocks. Along each axis the layout repeats
///   street | sidewalk | block | sidewalk
/// and closes with a final street, so streets ring the outer blocks too.
/// Coordinate origin is the outer corner of the first street.
class GridLayout {
 public:
  static constexpr double kBlockSize = 120.0;
  static constexpr double kSidewalkWidth = 3.0;
  static constexpr double kStreetWidth = 14.0;
  static constexpr int kLanesPerDirection = 2;
  static constexpr double kLaneWidth = kStreetWidth / (2 * kLanesPerDirection);
  static constexpr double kPeriod = kStreetWidth + 2 * kSidewalkWidth + kBlockSize;

  explicit GridLayout(int blocks_per_side);

  int blocks_per_side() const { return n_; }
  std::size_t num_blocks() const { return static_cast<std::size_t>(n_ * n_); }
  double extent() const { return n_ * kPeriod + kStreetWidth; }
  Rect bounds() const { return {0, 0, extent(), extent()}; }
  Vec3 center() const { return {extent() / 2, extent() / 2, 0}; }

  /// Street band k spans [street_start(k), street_start(k) + 14], k = 0..n.
  static double street_start(int k) { return k * kPeriod; }
  /// Block index k spans [block_start(k), block_start(k) + 120], k = 0..n-1.
  static double block_start(int k) { return k * kPeriod + kStreetWidth + kSidewalkWidth; }
  int num_streets() const { return n_ + 1; }

  Rect block(int col, int row) const;
  std::vector<Rect> blocks() const;

  /// Lane centerline across a street band, for a vehicle driving along
  /// `h`. Lane 0 is the outermost (curb side) lane of that direction.
  static double lane_offset(Heading h, int lane);
  /// Sidewalk centerlines (one per block edge), sorted ascending.
  const std::vector<double>& walk_lines() const { return walk_lines_; }

  /// Index of the street band containing coordinate c, or -1.
  int street_at(double c) const;
  bool in_street(double x, double y) const { return street_at(x) >= 0 || street_at(y) >= 0; }
  bool in_intersection(double x, double y) const { return street_at(x) >= 0 && street_at(y) >= 0; }
  bool on_sidewalk(double x, double y) const;
  /// Sidewalk or a crossing that continues a sidewalk strip over a street.
  bool walkable(double x, double y) const;
  bool drivable(double x, double y) const { return bounds().contains(x, y) && in_street(x, y); }

 private:
  int n_;
  std::vector<double> walk_lines_;
};

GridLayout build_layout(Regime regime);

}  // namespace miab::scenario
