#include "miab/radio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace miab::radio {

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ConfigError("MCS table is empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].index != static_cast<int>(i))
      throw ConfigError("MCS table indices must run 0..N-1 in order");
    if (entries_[i].spectral_efficiency < 0)
      throw ConfigError("negative spectral efficiency in MCS table");
    if (i > 0 && (entries_[i].min_sinr_db <= entries_[i - 1].min_sinr_db ||
                  entries_[i].spectral_efficiency <= entries_[i - 1].spectral_efficiency))
      throw ConfigError("MCS table entries must be strictly increasing (index " +
                        std::to_string(i) + ")");
  }
}

namespace {

double parse_double(std::string_view s, int line_no) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("bad number '" + std::string(s) + "' on MCS table line " +
                      std::to_string(line_no));
  return v;
}

}  // namespace

McsTable parse_mcs_table(std::string_view text) {
  std::vector<McsEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 3)
      throw ConfigError("MCS table line " + std::to_string(line_no) + " needs 3 fields");
    double idx = parse_double(fields[0], line_no);
    entries.push_back({static_cast<int>(idx), parse_double(fields[1], line_no),
                       parse_double(fields[2], line_no)});
  }
  return McsTable(std::move(entries));
}

McsTable load_mcs_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open MCS table '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mcs_table(ss.str());
}

const McsTable& default_mcs_table() {
  static const McsTable table = parse_mcs_table(R"(
0, -6.164, 0.2344
1, -4.847, 0.3066
2, -3.800, 0.3770
3, -2.418, 0.4902
4, -1.286, 0.6016
5, -0.079, 0.7402
6, 0.966, 0.8770
7, 1.998, 1.0273
8, 2.932, 1.1758
9, 3.814, 1.3262
10, 3.825, 1.3281
11, 4.646, 1.4766
12, 5.788, 1.6953
13, 6.871, 1.9141
14, 8.037, 2.1602
15, 9.161, 2.4063
16, 9.893, 2.5703
17, 10.246, 2.6504
18, 10.597, 2.7305
19, 11.886, 3.0293
20, 13.128, 3.3223
21, 14.330, 3.6094
22, 15.543, 3.9023
23, 16.820, 4.2129
24, 18.089, 4.5234
25, 19.281, 4.8164
26, 20.492, 5.1152
27, 21.370, 5.3320
28, 22.269, 5.5547
)");
  return table;
}

OllaState olla_update(OllaState s, bool ok, const OllaParams& p) {
  s.offset_db += ok ? p.step_up_db : -p.step_down_db;
  s.offset_db = std::clamp(s.offset_db, p.min_offset_db, p.max_offset_db);
  return s;
}

int select_mcs(double estimated_sinr_db, const OllaState& olla, const McsTable& table) {
  const double eff = estimated_sinr_db + olla.offset_db;
  const auto& e = table.entries();
  auto it = std::upper_bound(e.begin(), e.end(), eff,
                             [](double v, const McsEntry& m) { return v < m.min_sinr_db; });
  if (it == e.begin()) return 0;
  return std::prev(it)->index;
}

std::int64_t transport_block_bits_for_se(int n_rb, double se) {
  if (n_rb <= 0) return 0;
  return static_cast<std::int64_t>(
      std::floor(static_cast<double>(n_rb * kSubcarriersPerRb * kSymbolsPerSlot) * se + 1e-9));
}

std::int64_t transport_block_bits(int n_rb, int mcs, const McsTable& table) {
  return transport_block_bits_for_se(n_rb, table[static_cast<std::size_t>(mcs)].spectral_efficiency);
}

double noise_dbm(int n_subcarriers) {
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(n_subcarriers * kSubcarrierSpacingHz) +
         kNoiseFigureDb;
}

double per_re_power_dbm(double tx_power_dbm) {
  return tx_power_dbm - 10.0 * std::log10(static_cast<double>(kNumSubcarriers));
}

double rsrp_dbm(double tx_power_dbm, double link_gain_db) {
  return per_re_power_dbm(tx_power_dbm) + link_gain_db;
}

SinrSample make_sinr(double signal_mw, double interference_mw, double noise_mw) {
  SinrSample s;
  s.signal_dbm = linear_to_db(signal_mw);
  s.interference_mw = interference_mw;
  s.noise_dbm = linear_to_db(noise_mw);
  s.sinr_db = signal_mw > 0 ? s.signal_dbm - linear_to_db(noise_mw + interference_mw)
                            : -std::numeric_limits<double>::infinity();
  return s;
}

std::optional<std::uint32_t> attach(std::optional<std::uint32_t> current,
                                    const std::vector<Candidate>& candidates,
                                    double hysteresis_db) {
  if (candidates.empty()) return std::nullopt;
  const Candidate* best = &candidates.front();
  for (const auto& c : candidates)
    if (c.rsrp_dbm > best->rsrp_dbm) best = &c;
  if (current) {
    auto it = std::find_if(candidates.begin(), candidates.end(),
                           [&](const Candidate& c) { return c.id == *current; });
    if (it != candidates.end() && best->rsrp_dbm <= it->rsrp_dbm + hysteresis_db) return it->id;
  }
  return best->id;
}

OllaRunResult run_synthetic_olla(double mean, double jitter, std::int64_t n, std::uint64_t seed,
                                 const McsTable& table, const OllaParams& params) {
  auto rng = substream(seed, "olla.synthetic");
  OllaRunResult r;
  OllaState olla;
  double estimate = mean;
  for (std::int64_t i = 0; i < n; ++i) {
    int mcs = select_mcs(estimate, olla, table);
    double realised = mean + jitter * standard_normal(rng);
    bool ok = realised >= table[static_cast<std::size_t>(mcs)].min_sinr_db;
    olla = olla_update(olla, ok, params);
    ++r.transmissions;
    if (!ok) ++r.errors;
    estimate = realised;
  }
  r.final_offset_db = olla.offset_db;
  return r;
}

}  // namespace miab::radio
