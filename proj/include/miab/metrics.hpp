#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "miab/common.hpp"

namespace miab::metrics {

enum class UeClass : std::uint8_t { Pedestrian, Passenger };
std::string_view class_name(UeClass c);

enum class LinkCategory : std::uint8_t { AccessDl, AccessUl, BackhaulDl, BackhaulUl };
inline constexpr std::array<LinkCategory, 4> kAllCategories{
    LinkCategory::AccessDl, LinkCategory::AccessUl, LinkCategory::BackhaulDl,
    LinkCategory::BackhaulUl};
std::string_view category_name(LinkCategory c);

struct UeStats {
  NodeId id = kNoNode;
  UeClass cls = UeClass::Pedestrian;
  std::int64_t dl_generated_bits = 0;
  std::int64_t dl_delivered_bits = 0;
  std::int64_t ul_generated_bits = 0;
  std::int64_t ul_delivered_bits = 0;
  std::int64_t dl_active_slots = 0;  // slots that began with undelivered DL data
  std::vector<std::int32_t> dl_latency_slots;  // delivered packets
  std::vector<std::int32_t> dl_pending_age_slots;  // undelivered at the end

  /// Delivered DL bits over the time the UE had DL data waiting.
  double throughput_bps() const;
  /// P90 over delivered packets, counting undelivered ones at their age.
  double p90_latency_ms() const;
};

struct McsHistogram {
  std::array<std::vector<std::int64_t>, 4> counts;

  explicit McsHistogram(std::size_t n_mcs = 29);
  void add(LinkCategory c, int mcs) { ++counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(mcs)]; }
  std::int64_t total(LinkCategory c) const;
  std::size_t size() const { return counts[0].size(); }
};

struct MetricsBundle {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string config_text;
  SlotIndex slots = 0;
  std::vector<UeStats> ues;
  McsHistogram mcs;
  std::array<std::int64_t, 4> transmissions{};
  std::array<std::int64_t, 4> errors{};
  std::int64_t handovers = 0;
  std::int64_t path_loss_clamps = 0;

  std::int64_t generated_bits(UeClass c) const;
  std::int64_t delivered_bits(UeClass c) const;
  double delivered_fraction(UeClass c) const;
};

/// Empirical CDF of `values` at each grid point: (x, #{v <= x} / n).
std::vector<std::pair<double, double>> cdf(std::span<const double> values,
                                           std::span<const double> grid);

/// Linear-interpolated quantile of a non-empty sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

struct ClassSummary {
  double median_throughput_bps = 0.0;
  double frac_above_3_2_mbps = 0.0;
  double p90_latency_ms = 0.0;          // pooled over the class's packets
  double frac_ues_p90_below_50ms = 0.0;
  double delivered_fraction = 0.0;
  std::int64_t generated_bits = 0;
  std::int64_t delivered_bits = 0;
};

inline constexpr double kThroughputThresholdBps = 3.2e6;

ClassSummary summarize(const MetricsBundle& bundle, UeClass c);
ClassSummary summarize(std::span<const MetricsBundle> bundles, UeClass c);

std::string hash_hex(std::uint64_t h);

/// Writes throughput_cdf.csv, latency_cdf.csv, totals.csv, mcs_hist.csv and
/// summary.txt under out_dir.
void export_bundle(const MetricsBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace miab::metrics
