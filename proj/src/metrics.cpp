#include "miab/metrics.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace miab::metrics {

std::string_view class_name(UeClass c) {
  return c == UeClass::Pedestrian ? "pedestrian" : "passenger";
}

std::string_view category_name(LinkCategory c) {
  switch (c) {
    case LinkCategory::AccessDl: return "access_dl";
    case LinkCategory::AccessUl: return "access_ul";
    case LinkCategory::BackhaulDl: return "backhaul_dl";
    case LinkCategory::BackhaulUl: return "backhaul_ul";
  }
  return "?";
}

double UeStats::throughput_bps() const {
  if (dl_active_slots == 0) return 0.0;
  return static_cast<double>(dl_delivered_bits) / (dl_active_slots * kSlotSeconds);
}

double UeStats::p90_latency_ms() const {
  std::vector<double> v;
  v.reserve(dl_latency_slots.size() + dl_pending_age_slots.size());
  for (auto s : dl_latency_slots) v.push_back(s * kSlotMs);
  for (auto s : dl_pending_age_slots) v.push_back(s * kSlotMs);
  if (v.empty()) return 0.0;
  return quantile(std::move(v), 0.9);
}

McsHistogram::McsHistogram(std::size_t n_mcs) {
  for (auto& c : counts) c.assign(n_mcs, 0);
}

std::int64_t McsHistogram::total(LinkCategory c) const {
  const auto& v = counts[static_cast<std::size_t>(c)];
  std::int64_t s = 0;
  for (auto x : v) s += x;
  return s;
}

std::int64_t MetricsBundle::generated_bits(UeClass c) const {
  std::int64_t s = 0;
  for (const auto& u : ues)
    if (u.cls == c) s += u.dl_generated_bits;
  return s;
}

std::int64_t MetricsBundle::delivered_bits(UeClass c) const {
  std::int64_t s = 0;
  for (const auto& u : ues)
    if (u.cls == c) s += u.dl_delivered_bits;
  return s;
}

double MetricsBundle::delivered_fraction(UeClass c) const {
  auto g = generated_bits(c);
  return g > 0 ? static_cast<double>(delivered_bits(c)) / static_cast<double>(g) : 0.0;
}

std::vector<std::pair<double, double>> cdf(std::span<const double> values,
                                           std::span<const double> grid) {
  if (values.empty()) throw std::invalid_argument("cdf of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  const auto n = static_cast<double>(sorted.size());
  for (double x : grid) {
    auto k = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    out.emplace_back(x, static_cast<double>(k) / n);
  }
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

ClassSummary summarize(std::span<const MetricsBundle> bundles, UeClass c) {
  ClassSummary s;
  std::vector<double> tput, pooled;
  std::size_t n_ues = 0, fast = 0, low_latency = 0;
  for (const auto& b : bundles) {
    for (const auto& u : b.ues) {
      if (u.cls != c) continue;
      ++n_ues;
      double t = u.throughput_bps();
      tput.push_back(t);
      if (t > kThroughputThresholdBps) ++fast;
      if (u.p90_latency_ms() < 50.0) ++low_latency;
      for (auto l : u.dl_latency_slots) pooled.push_back(l * kSlotMs);
      for (auto l : u.dl_pending_age_slots) pooled.push_back(l * kSlotMs);
      s.generated_bits += u.dl_generated_bits;
      s.delivered_bits += u.dl_delivered_bits;
    }
  }
  if (n_ues == 0) return s;
  s.median_throughput_bps = quantile(tput, 0.5);
  s.frac_above_3_2_mbps = static_cast<double>(fast) / static_cast<double>(n_ues);
  s.frac_ues_p90_below_50ms = static_cast<double>(low_latency) / static_cast<double>(n_ues);
  s.p90_latency_ms = pooled.empty() ? 0.0 : quantile(std::move(pooled), 0.9);
  s.delivered_fraction = s.generated_bits > 0 ? static_cast<double>(s.delivered_bits) /
                                                    static_cast<double>(s.generated_bits)
                                              : 0.0;
  return s;
}

ClassSummary summarize(const MetricsBundle& bundle, UeClass c) {
  return summarize(std::span<const MetricsBundle>(&bundle, 1), c);
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void header(std::ostream& os, const MetricsBundle& b) {
  os << "# config_hash=" << hash_hex(b.config_hash) << " seed=" << b.seed << "\n";
}

void check(std::ofstream& out, const std::filesystem::path& p) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace

void export_bundle(const MetricsBundle& b, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  const std::array<UeClass, 2> classes{UeClass::Passenger, UeClass::Pedestrian};
  {
    auto p = dir / "throughput_cdf.csv";
    auto out = open_out(p);
    header(out, b);
    out << "class,throughput_bps,cdf\n";
    for (auto c : classes) {
      std::vector<double> v;
      for (const auto& u : b.ues)
        if (u.cls == c) v.push_back(u.throughput_bps());
      std::sort(v.begin(), v.end());
      for (std::size_t i = 0; i < v.size(); ++i)
        out << class_name(c) << ',' << fmt(v[i]) << ',' << fmt(double(i + 1) / double(v.size()))
            << '\n';
    }
    check(out, p);
  }
  {
    auto p = dir / "latency_cdf.csv";
    auto out = open_out(p);
    header(out, b);
    out << "class,latency_ms,cdf\n";
    for (auto c : classes) {
      std::map<std::int32_t, std::int64_t> counts;
      std::int64_t n = 0;
      for (const auto& u : b.ues) {
        if (u.cls != c) continue;
        for (auto l : u.dl_latency_slots) {
          ++counts[l];
          ++n;
        }
      }
      std::int64_t acc = 0;
      for (auto [l, k] : counts) {
        acc += k;
        out << class_name(c) << ',' << fmt(l * kSlotMs) << ',' << fmt(double(acc) / double(n))
            << '\n';
      }
    }
    check(out, p);
  }
  {
    auto p = dir / "totals.csv";
    auto out = open_out(p);
    header(out, b);
    out << "key,value\n";
    for (auto c : classes) {
      std::int64_t ulg = 0, uld = 0;
      for (const auto& u : b.ues)
        if (u.cls == c) {
          ulg += u.ul_generated_bits;
          uld += u.ul_delivered_bits;
        }
      out << "generated_" << class_name(c) << "_bits," << b.generated_bits(c) << '\n';
      out << "delivered_" << class_name(c) << "_bits," << b.delivered_bits(c) << '\n';
      out << "generated_" << class_name(c) << "_ul_bits," << ulg << '\n';
      out << "delivered_" << class_name(c) << "_ul_bits," << uld << '\n';
    }
    out << "slots," << b.slots << '\n';
    out << "handovers," << b.handovers << '\n';
    out << "path_loss_clamps," << b.path_loss_clamps << '\n';
    check(out, p);
  }
  {
    auto p = dir / "mcs_hist.csv";
    auto out = open_out(p);
    header(out, b);
    out << "mcs";
    for (auto c : kAllCategories) out << ',' << category_name(c);
    out << '\n';
    for (std::size_t i = 0; i < b.mcs.size(); ++i) {
      out << i;
      for (auto c : kAllCategories) out << ',' << b.mcs.counts[static_cast<std::size_t>(c)][i];
      out << '\n';
    }
    check(out, p);
  }
  {
    auto p = dir / "summary.txt";
    auto out = open_out(p);
    header(out, b);
    out << "slots = " << b.slots << '\n';
    for (auto c : classes) {
      auto s = summarize(b, c);
      auto k = std::string(class_name(c));
      out << k << "_median_throughput_bps = " << fmt(s.median_throughput_bps) << '\n';
      out << k << "_frac_above_3.2mbps = " << fmt(s.frac_above_3_2_mbps) << '\n';
      out << k << "_p90_latency_ms = " << fmt(s.p90_latency_ms) << '\n';
      out << k << "_frac_ues_p90_below_50ms = " << fmt(s.frac_ues_p90_below_50ms) << '\n';
      out << k << "_delivered_fraction = " << fmt(s.delivered_fraction) << '\n';
    }
    for (auto c : kAllCategories) {
      auto i = static_cast<std::size_t>(c);
      double bler = b.transmissions[i] ? double(b.errors[i]) / double(b.transmissions[i]) : 0.0;
      out << category_name(c) << "_transmissions = " << b.transmissions[i] << '\n';
      out << category_name(c) << "_bler = " << fmt(bler) << '\n';
    }
    check(out, p);
  }
}

}  // namespace miab::metrics
