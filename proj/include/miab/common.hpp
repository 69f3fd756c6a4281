#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace miab {

using NodeId = std::uint32_t;
using BusId = std::uint32_t;
using SlotIndex = std::int64_t;

inline constexpr BusId kNoBus = static_cast<BusId>(-1);
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

// Numerology shared by every module (50 MHz carrier at 28 GHz, mu = 2).
inline constexpr double kCarrierGHz = 28.0;
inline constexpr double kSubcarrierSpacingHz = 60e3;
inline constexpr int kSubcarriersPerRb = 12;
inline constexpr int kNumRbs = 66;
inline constexpr int kNumSubcarriers = kNumRbs * kSubcarriersPerRb;
inline constexpr int kSymbolsPerSlot = 14;
inline constexpr double kSlotSeconds = 0.25e-3;
inline constexpr double kSlotMs = 0.25;
inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double norm2d() const { return std::hypot(x, y); }
};

inline double distance3d(Vec3 a, Vec3 b) { return (b - a).norm(); }
inline double distance2d(Vec3 a, Vec3 b) { return (b - a).norm2d(); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle in degrees to (-180, 180].
inline double wrap_degrees(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0) w += 360.0;
  double r = w - 180.0;
  return r == -180.0 ? 180.0 : r;
}

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace miab
