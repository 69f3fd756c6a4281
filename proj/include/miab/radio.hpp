#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "miab/common.hpp"
#include "miab/rng.hpp"

namespace miab::radio {

struct McsEntry {
  int index = 0;
  double min_sinr_db = 0.0;
  double spectral_efficiency = 0.0;  // bits per resource element
};

/// CQI/MCS mapping: thresholds and efficiencies, both strictly increasing.
class McsTable {
 public:
  McsTable() = default;
  explicit McsTable(std::vector<McsEntry> entries);

  std::size_t size() const { return entries_.size(); }
  const McsEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<McsEntry>& entries() const { return entries_; }
  int top() const { return static_cast<int>(entries_.size()) - 1; }

 private:
  std::vector<McsEntry> entries_;
};

/// "index, min_sinr_db, spectral_efficiency" per line; '#' starts a comment.
McsTable parse_mcs_table(std::string_view text);
McsTable load_mcs_table(const std::string& path);
/// The shipped 29-entry table (same values as data/mcs_table.csv).
const McsTable& default_mcs_table();

struct OllaParams {
  double step_down_db = 1.0;
  double step_up_db = 0.1;
  double min_offset_db = -15.0;
  double max_offset_db = 5.0;
};

struct OllaState {
  double offset_db = 0.0;
  friend bool operator==(const OllaState&, const OllaState&) = default;
};

OllaState olla_update(OllaState state, bool decode_ok, const OllaParams& params = {});

/// Highest index whose threshold is <= estimate + offset; index 0 when none.
int select_mcs(double estimated_sinr_db, const OllaState& olla, const McsTable& table);

std::int64_t transport_block_bits(int n_rb, int mcs, const McsTable& table);
std::int64_t transport_block_bits_for_se(int n_rb, double spectral_efficiency);

inline constexpr double kThermalNoiseDbmPerHz = -174.0;
inline constexpr double kNoiseFigureDb = 9.0;

double noise_dbm(int n_subcarriers);
/// Total power spread evenly over every subcarrier of the carrier.
double per_re_power_dbm(double tx_power_dbm);

/// Received power per resource element; gain_db is the full serving link
/// gain (antenna gains minus losses).
double rsrp_dbm(double tx_power_dbm, double link_gain_db);

struct SinrSample {
  double signal_dbm = 0.0;
  double interference_mw = 0.0;
  double noise_dbm = 0.0;
  double sinr_db = 0.0;
};

SinrSample make_sinr(double signal_mw, double interference_mw, double noise_mw);

struct Candidate {
  std::uint32_t id;
  double rsrp_dbm;
};

/// RSRP argmax with hysteresis against the current server. Returns nullopt
/// for an empty candidate set.
std::optional<std::uint32_t> attach(std::optional<std::uint32_t> current,
                                    const std::vector<Candidate>& candidates,
                                    double hysteresis_db);

struct OllaRunResult {
  std::int64_t transmissions = 0;
  std::int64_t errors = 0;
  double final_offset_db = 0.0;
  double bler() const { return transmissions ? static_cast<double>(errors) / transmissions : 0.0; }
};

/// Synthetic link: i.i.d. Gaussian SINR around a mean, estimate = previous
/// realised SINR, decode iff realised >= threshold of the chosen MCS.
OllaRunResult run_synthetic_olla(double mean_sinr_db, double jitter_db, std::int64_t n,
                                 std::uint64_t seed, const McsTable& table = default_mcs_table(),
                                 const OllaParams& params = {});

}  // namespace miab::radio
