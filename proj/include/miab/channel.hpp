#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "miab/common.hpp"
#include "miab/rng.hpp"
#include "miab/scenario.hpp"

namespace miab::channel {

enum class Scenario : std::uint8_t { UMa, UMi, InH };
std::string_view scenario_name(Scenario s);

struct LinkClass {
  Scenario scenario = Scenario::UMi;
  bool forced_nlos = false;
  int penetration_count = 0;  // bus bodies crossed, at most 2

  friend bool operator==(const LinkClass&, const LinkClass&) = default;
};

inline constexpr double kPenetrationLossDb = 20.0;
inline constexpr int kMaxPenetrations = 2;

/// Scenario class and bus-body crossings for the pair. `boxes` holds one box
/// per bus, indexed by bus id. A box containing both endpoints is not a
/// crossing (both nodes are inside that bus).
LinkClass classify(const scenario::NetworkNode& a, const scenario::NetworkNode& b,
                   std::span<const scenario::BusBox> boxes);

/// LOS probability for the class as a function of 2D distance. h_ut only
/// matters for UMa above 13 m.
double los_probability(Scenario s, double d2d_m, double h_ut_m = 1.5);

/// LOS is drawn once per pair as a uniform u and compared against the
/// probability at the current distance, so it changes only as the pair moves.
bool los_state(const LinkClass& link, double u, double d2d_m, double h_ut_m = 1.5);

struct PathLoss {
  double db = 0.0;
  bool clamped = false;  // distance was raised to the formula minimum
};

inline constexpr double kUrbanMinDistanceM = 10.0;  // UMa/UMi, on d2D
inline constexpr double kIndoorMinDistanceM = 1.0;  // InH, on d3D

/// Breakpoint distance d'_BP with a 1 m effective environment height.
double breakpoint_distance(double h_bs_m, double h_ut_m, double fc_ghz);

/// Path loss in dB. h_bs is the higher end of the pair, h_ut the lower.
PathLoss path_loss(Scenario s, bool los, double d2d_m, double h_bs_m, double h_ut_m,
                   double fc_ghz = kCarrierGHz);

double shadowing_sigma_db(Scenario s, bool los);
double decorrelation_distance_m(Scenario s, bool los);

/// Spatially correlated log-normal shadowing for one pair: a unit normal
/// state advanced as AR(1) over the pair's relative displacement, scaled by
/// the sigma of the current class and LOS state.
class ShadowingProcess {
 public:
  ShadowingProcess() = default;
  explicit ShadowingProcess(SplitMix64& rng) : z_(standard_normal(rng)) {}

  void advance(double moved_m, Scenario s, bool los, SplitMix64& rng);
  double value_db(Scenario s, bool los) const { return shadowing_sigma_db(s, los) * z_; }
  double unit() const { return z_; }

 private:
  double z_ = 0.0;
};

/// 3GPP 3D element gain in dBi towards direction `to_peer` (world frame,
/// from the node). Omni elements return their max gain.
double element_gain_db(const scenario::AntennaConfig& antenna, Vec3 to_peer);

/// Beamforming gain of an ideally steered array.
double array_gain_db(const scenario::AntennaConfig& antenna);

/// Element gain plus array gain when the beam is steered at the peer.
double antenna_gain_db(const scenario::AntennaConfig& antenna, Vec3 to_peer, bool serving);

inline constexpr double kRicianKDb = 9.0;

/// Small-scale fading as an extra loss in dB: -10 log10 |h|^2 with Rayleigh
/// |h| for NLOS and Rician (K = 9 dB) for LOS, unit mean power.
double fading_loss_db(bool los, SplitMix64& rng);

/// Large-scale state of one unordered pair, plus the element gain at each
/// end towards the other.
struct LinkState {
  LinkClass cls;
  bool los = false;
  double path_loss_db = 0.0;
  double shadowing_db = 0.0;
  double penetration_db = 0.0;
  double fading_db = 0.0;
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;

  double propagation_loss_db() const {
    return path_loss_db + shadowing_db + penetration_db + fading_db;
  }
  double total_loss_db() const { return propagation_loss_db() - tx_gain_db - rx_gain_db; }
};

}  // namespace miab::channel
