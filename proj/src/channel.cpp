#include "miab/channel.hpp"

#include <algorithm>
#include <cmath>

namespace miab::channel {

using scenario::NodeKind;

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::UMa: return "UMa";
    case Scenario::UMi: return "UMi";
    case Scenario::InH: return "InH";
  }
  return "?";
}

LinkClass classify(const scenario::NetworkNode& a, const scenario::NetworkNode& b,
                   std::span<const scenario::BusBox> boxes) {
  LinkClass out;
  if (a.kind == NodeKind::MacroGnb || b.kind == NodeKind::MacroGnb) {
    out.scenario = Scenario::UMa;
  } else if (scenario::is_inside_bus(a.kind) && scenario::is_inside_bus(b.kind) &&
             a.bus != kNoBus && a.bus == b.bus) {
    out.scenario = Scenario::InH;
  } else {
    out.scenario = Scenario::UMi;
  }
  for (const auto& box : boxes) {
    if (box.contains(a.position) && box.contains(b.position)) continue;
    if (box.intersects_segment(a.position, b.position)) ++out.penetration_count;
  }
  out.penetration_count = std::min(out.penetration_count, kMaxPenetrations);
  out.forced_nlos = out.penetration_count > 0;
  return out;
}

double los_probability(Scenario s, double d, double h_ut) {
  switch (s) {
    case Scenario::UMa: {
      if (d <= 18.0) return 1.0;
      double c = h_ut <= 13.0 ? 0.0 : std::pow((h_ut - 13.0) / 10.0, 1.5);
      double base = 18.0 / d + std::exp(-d / 63.0) * (1.0 - 18.0 / d);
      return base * (1.0 + c * 1.25 * std::pow(d / 100.0, 3) * std::exp(-d / 150.0));
    }
    case Scenario::UMi:
      if (d <= 18.0) return 1.0;
      return 18.0 / d + std::exp(-d / 36.0) * (1.0 - 18.0 / d);
    case Scenario::InH:
      if (d <= 1.2) return 1.0;
      if (d < 6.5) return std::exp(-(d - 1.2) / 4.7);
      return 0.32 * std::exp(-(d - 6.5) / 32.6);
  }
  return 0.0;
}

bool los_state(const LinkClass& link, double u, double d2d, double h_ut) {
  if (link.forced_nlos) return false;
  return u < los_probability(link.scenario, d2d, h_ut);
}

double breakpoint_distance(double h_bs, double h_ut, double fc_ghz) {
  constexpr double h_e = 1.0;
  return 4.0 * (h_bs - h_e) * (h_ut - h_e) * fc_ghz * 1e9 / kSpeedOfLight;
}

namespace {

double los_urban(Scenario s, double d2d, double d3d, double h_bs, double h_ut, double fc) {
  const double dbp = breakpoint_distance(h_bs, h_ut, fc);
  const double dh2 = (h_bs - h_ut) * (h_bs - h_ut);
  if (s == Scenario::UMa) {
    if (d2d <= dbp) return 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc);
    return 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.0 * std::log10(dbp * dbp + dh2);
  }
  if (d2d <= dbp) return 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  return 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.5 * std::log10(dbp * dbp + dh2);
}

}  // namespace

PathLoss path_loss(Scenario s, bool los, double d2d, double h_bs, double h_ut, double fc) {
  PathLoss out;
  const double dh = h_bs - h_ut;
  if (s == Scenario::InH) {
    double d3d = std::hypot(d2d, dh);
    if (d3d < kIndoorMinDistanceM) {
      d3d = kIndoorMinDistanceM;
      out.clamped = true;
    }
    double pl_los = 32.4 + 17.3 * std::log10(d3d) + 20.0 * std::log10(fc);
    if (los) {
      out.db = pl_los;
    } else {
      double pl_nlos = 17.3 + 38.3 * std::log10(d3d) + 24.9 * std::log10(fc);
      out.db = std::max(pl_los, pl_nlos);
    }
    return out;
  }
  if (d2d < kUrbanMinDistanceM) {
    d2d = kUrbanMinDistanceM;
    out.clamped = true;
  }
  const double d3d = std::hypot(d2d, dh);
  const double pl_los = los_urban(s, d2d, d3d, h_bs, h_ut, fc);
  if (los) {
    out.db = pl_los;
    return out;
  }
  double pl_nlos = s == Scenario::UMa
                       ? 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc) - 0.6 * (h_ut - 1.5)
                       : 22.4 + 35.3 * std::log10(d3d) + 21.3 * std::log10(fc) - 0.3 * (h_ut - 1.5);
  out.db = std::max(pl_los, pl_nlos);
  return out;
}

double shadowing_sigma_db(Scenario s, bool los) {
  switch (s) {
    case Scenario::UMa: return los ? 4.0 : 6.0;
    case Scenario::UMi: return los ? 4.0 : 7.82;
    case Scenario::InH: return los ? 3.0 : 8.03;
  }
  return 0.0;
}

double decorrelation_distance_m(Scenario s, bool los) {
  switch (s) {
    case Scenario::UMa: return los ? 37.0 : 50.0;
    case Scenario::UMi: return los ? 10.0 : 13.0;
    case Scenario::InH: return los ? 10.0 : 6.0;
  }
  return 1.0;
}

void ShadowingProcess::advance(double moved_m, Scenario s, bool los, SplitMix64& rng) {
  if (moved_m <= 0.0) return;
  double rho = std::exp(-moved_m / decorrelation_distance_m(s, los));
  z_ = rho * z_ + std::sqrt(1.0 - rho * rho) * standard_normal(rng);
}

double element_gain_db(const scenario::AntennaConfig& antenna, Vec3 d) {
  if (antenna.element == scenario::ElementPattern::Omni) return antenna.max_element_gain_dbi;
  double phi = wrap_degrees(rad_to_deg(std::atan2(d.y, d.x)) - antenna.azimuth_deg);
  double theta = rad_to_deg(std::atan2(std::hypot(d.x, d.y), d.z));
  double theta_tilt = 90.0 + antenna.tilt_deg;
  double a_v = -std::min(12.0 * std::pow((theta - theta_tilt) / 65.0, 2), 30.0);
  double a_h = -std::min(12.0 * std::pow(phi / 65.0, 2), 30.0);
  return antenna.max_element_gain_dbi - std::min(-(a_v + a_h), 30.0);
}

double array_gain_db(const scenario::AntennaConfig& antenna) {
  return 10.0 * std::log10(static_cast<double>(antenna.num_elements()));
}

double antenna_gain_db(const scenario::AntennaConfig& antenna, Vec3 to_peer, bool serving) {
  return element_gain_db(antenna, to_peer) + (serving ? array_gain_db(antenna) : 0.0);
}

double fading_loss_db(bool los, SplitMix64& rng) {
  double re = standard_normal(rng) / std::numbers::sqrt2;
  double im = standard_normal(rng) / std::numbers::sqrt2;
  if (los) {
    double k = db_to_linear(kRicianKDb);
    double spec = std::sqrt(k / (k + 1.0));
    double diff = std::sqrt(1.0 / (k + 1.0));
    re = spec + diff * re;
    im = diff * im;
  }
  double power = std::max(re * re + im * im, 1e-12);
  return -10.0 * std::log10(power);
}

}  // namespace miab::channel
