#include "miab/layout.hpp"

#include <cmath>

namespace miab::scenario {

std::string_view regime_name(Regime r) {
  return r == Regime::NotLimited ? "not_limited" : "limited";
}

Regime parse_regime(std::string_view s) {
  if (s == "not_limited") return Regime::NotLimited;
  if (s == "limited") return Regime::Limited;
  throw ConfigError("unknown regime '" + std::string(s) + "'");
}

std::string_view heading_name(Heading h) {
  switch (h) {
    case Heading::East: return "E";
    case Heading::North: return "N";
    case Heading::West: return "W";
    case Heading::South: return "S";
  }
  return "?";
}

GridLayout::GridLayout(int blocks_per_side) : n_(blocks_per_side) {
  if (n_ < 1) throw ConfigError("layout needs at least one block per side");
  for (int k = 0; k < n_; ++k) {
    walk_lines_.push_back(block_start(k) - kSidewalkWidth / 2);
    walk_lines_.push_back(block_start(k) + kBlockSize + kSidewalkWidth / 2);
  }
}

Rect GridLayout::block(int col, int row) const {
  return {block_start(col), block_start(row), block_start(col) + kBlockSize,
          block_start(row) + kBlockSize};
}

std::vector<Rect> GridLayout::blocks() const {
  std::vector<Rect> out;
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) out.push_back(block(c, r));
  return out;
}

double GridLayout::lane_offset(Heading h, int lane) {
  // Right-hand traffic: a vehicle keeps the band half on its right. For +x
  // travel the right side is -y (low offsets); for +y travel it is +x (high
  // offsets).
  double curbside_low = (h == Heading::East || h == Heading::South);
  double centre = kLaneWidth / 2 + lane * kLaneWidth;
  return curbside_low ? centre : kStreetWidth - centre;
}

int GridLayout::street_at(double c) const {
  if (c < 0 || c > extent()) return -1;
  int k = static_cast<int>(std::floor(c / kPeriod));
  if (k > n_) k = n_;
  double off = c - street_start(k);
  if (off >= -1e-9 && off <= kStreetWidth + 1e-9) return k;
  return -1;
}

namespace {
// Distance band test on one axis: is c inside a sidewalk strip on that axis?
bool in_sidewalk_band(double c, int n) {
  for (int k = 0; k < n; ++k) {
    double b0 = GridLayout::block_start(k);
    double b1 = b0 + GridLayout::kBlockSize;
    if ((c >= b0 - GridLayout::kSidewalkWidth - 1e-9 && c <= b0 + 1e-9) ||
        (c >= b1 - 1e-9 && c <= b1 + GridLayout::kSidewalkWidth + 1e-9))
      return true;
  }
  return false;
}
bool in_block_span(double c, int n, double margin) {
  for (int k = 0; k < n; ++k) {
    double b0 = GridLayout::block_start(k) - margin;
    double b1 = GridLayout::block_start(k) + GridLayout::kBlockSize + margin;
    if (c >= b0 - 1e-9 && c <= b1 + 1e-9) return true;
  }
  return false;
}
}  // namespace

bool GridLayout::on_sidewalk(double x, double y) const {
  // Ring of width 3 m around each block.
  bool xs = in_sidewalk_band(x, n_) && in_block_span(y, n_, kSidewalkWidth);
  bool ys = in_sidewalk_band(y, n_) && in_block_span(x, n_, kSidewalkWidth);
  return xs || ys;
}

bool GridLayout::walkable(double x, double y) const {
  if (!bounds().contains(x, y)) return false;
  if (on_sidewalk(x, y)) return true;
  // crossings: sidewalk strip continued across a street band
  return (in_sidewalk_band(x, n_) && street_at(y) >= 0) ||
         (in_sidewalk_band(y, n_) && street_at(x) >= 0);
}

GridLayout build_layout(Regime regime) {
  return GridLayout(regime == Regime::NotLimited ? 3 : 1);
}

}  // namespace miab::scenario
