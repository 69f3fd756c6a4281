#include "miab/frame.hpp"

#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace miab::frame {

std::string_view to_token(SlotDirection d) {
  switch (d) {
    case SlotDirection::Downlink: return "DL";
    case SlotDirection::Uplink: return "UL";
    case SlotDirection::SpecialDownlink: return "S";
    case SlotDirection::Silent: return "-";
  }
  return "?";
}

SlotDirection parse_token(std::string_view token) {
  if (token == "DL") return SlotDirection::Downlink;
  if (token == "UL") return SlotDirection::Uplink;
  if (token == "S") return SlotDirection::SpecialDownlink;
  if (token == "-") return SlotDirection::Silent;
  throw InvalidPattern("unknown slot token '" + std::string(token) + "'");
}

std::string_view role_name(Role r) {
  switch (r) {
    case Role::DonorAccess: return "donor_access";
    case Role::Backhaul: return "backhaul";
    case Role::MiabAccess: return "miab_access";
  }
  return "?";
}

FramePattern::FramePattern(std::vector<SlotDirection> donor_access,
                           std::vector<SlotDirection> backhaul,
                           std::vector<SlotDirection> miab_access)
    : donor_access_(std::move(donor_access)),
      backhaul_(std::move(backhaul)),
      miab_access_(std::move(miab_access)) {
  validate();
}

FramePattern FramePattern::donor_only(std::vector<SlotDirection> donor_access) {
  FramePattern p;
  p.donor_access_ = std::move(donor_access);
  p.validate();
  return p;
}

void FramePattern::validate() const {
  if (donor_access_.empty()) throw InvalidPattern("pattern must have at least one slot");
  if (backhaul_.empty() != miab_access_.empty())
    throw InvalidPattern("backhaul and mIAB access rows must be given together");
  if (!backhaul_.empty() &&
      (backhaul_.size() != donor_access_.size() || miab_access_.size() != donor_access_.size()))
    throw InvalidPattern("all rows must have the same length");
}

const std::vector<SlotDirection>& FramePattern::row(Role r) const {
  switch (r) {
    case Role::DonorAccess: return donor_access_;
    case Role::Backhaul: return backhaul_;
    case Role::MiabAccess: return miab_access_;
  }
  return donor_access_;
}

SlotDirection FramePattern::at(Role r, SlotIndex slot) const {
  const auto& seq = row(r);
  if (seq.empty()) return SlotDirection::Silent;
  auto n = static_cast<SlotIndex>(seq.size());
  auto idx = ((slot % n) + n) % n;
  return seq[static_cast<std::size_t>(idx)];
}

Fraction::Fraction(std::int64_t n, std::int64_t d) {
  if (d <= 0) throw std::invalid_argument("fraction denominator must be positive");
  auto g = std::gcd(n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

Fraction operator+(Fraction a, Fraction b) {
  return Fraction(a.num * b.den + b.num * a.den, a.den * b.den);
}

std::ostream& operator<<(std::ostream& os, const Fraction& f) {
  return os << f.num << '/' << f.den;
}

UsageReport compute_usage(const FramePattern& pattern) {
  if (pattern.length() == 0) throw InvalidPattern("empty pattern");
  UsageReport report;
  auto len = static_cast<std::int64_t>(pattern.length());
  for (Role r : kAllRoles) {
    if (!pattern.has_role(r)) continue;
    std::int64_t dl = 0, ul = 0;
    for (auto d : pattern.row(r)) {
      dl += is_downlink(d) ? 1 : 0;
      ul += is_uplink(d) ? 1 : 0;
    }
    report.roles[r] = RoleUsage{Fraction(dl, len), Fraction(ul, len), Fraction(dl + ul, len)};
  }
  return report;
}

std::string_view mode_name(OperationMode m) {
  switch (m) {
    case OperationMode::ModeA: return "A";
    case OperationMode::ModeB: return "B";
    case OperationMode::ModeCD: return "C/D";
    case OperationMode::SafeBySilence: return "silent";
  }
  return "?";
}

std::vector<OperationMode> check_self_interference(const FramePattern& pattern) {
  if (!pattern.has_miab_rows())
    throw InvalidPattern("self-interference check needs backhaul and mIAB access rows");
  std::vector<OperationMode> out;
  out.reserve(pattern.length());
  for (std::size_t i = 0; i < pattern.length(); ++i) {
    auto bh = pattern.row(Role::Backhaul)[i];
    auto acc = pattern.row(Role::MiabAccess)[i];
    if (!is_active(bh) || !is_active(acc)) {
      out.push_back(OperationMode::SafeBySilence);
    } else if (is_downlink(bh) && is_uplink(acc)) {
      out.push_back(OperationMode::ModeA);
    } else if (is_uplink(bh) && is_downlink(acc)) {
      out.push_back(OperationMode::ModeB);
    } else {
      out.push_back(OperationMode::ModeCD);
    }
  }
  return out;
}

bool is_self_interference_free(const FramePattern& pattern) {
  for (auto m : check_self_interference(pattern))
    if (m == OperationMode::ModeCD) return false;
  return true;
}

std::string_view case_name(InterferenceCase c) {
  switch (c) {
    case InterferenceCase::Case01: return "Case01";
    case InterferenceCase::Case02: return "Case02";
    case InterferenceCase::Case03: return "Case03";
    case InterferenceCase::Case04: return "Case04";
  }
  return "?";
}

std::string_view status_name(CaseStatus s) {
  switch (s) {
    case CaseStatus::Possible: return "possible";
    case CaseStatus::AvoidedBySilence: return "avoided_silence";
    case CaseStatus::AvoidedByAlignment: return "avoided_alignment";
  }
  return "?";
}

CaseLinks case_links(InterferenceCase c) {
  using enum SlotDirection;
  switch (c) {
    // passenger UL (to DU) hits a pedestrian receiving donor DL
    case InterferenceCase::Case01: return {Role::MiabAccess, Role::DonorAccess, Uplink, Downlink};
    // donor DL hits the DU receiving passenger UL
    case InterferenceCase::Case02: return {Role::DonorAccess, Role::MiabAccess, Downlink, Uplink};
    // pedestrian UL (to donor) hits a passenger receiving DU DL
    case InterferenceCase::Case03: return {Role::DonorAccess, Role::MiabAccess, Uplink, Downlink};
    // DU DL hits the donor receiving pedestrian UL
    case InterferenceCase::Case04: return {Role::MiabAccess, Role::DonorAccess, Downlink, Uplink};
  }
  return {Role::DonorAccess, Role::DonorAccess, Downlink, Downlink};
}

CaseStatus classify_case(InterferenceCase c, SlotDirection donor_access,
                         SlotDirection miab_access) {
  auto links = case_links(c);
  auto dir_of = [&](Role r) { return r == Role::DonorAccess ? donor_access : miab_access; };
  auto agg = dir_of(links.aggressor);
  auto vic = dir_of(links.victim);
  if (!is_active(agg) || !is_active(vic)) return CaseStatus::AvoidedBySilence;
  auto matches = [](SlotDirection have, SlotDirection want) {
    return is_downlink(want) ? is_downlink(have) : is_uplink(have);
  };
  if (matches(agg, links.aggressor_dir) && matches(vic, links.victim_dir))
    return CaseStatus::Possible;
  return CaseStatus::AvoidedByAlignment;
}

std::vector<SlotCases> avoided_cases(const FramePattern& pattern) {
  if (!pattern.has_miab_rows())
    throw InvalidPattern("interference cases need backhaul and mIAB access rows");
  std::vector<SlotCases> out(pattern.length());
  for (std::size_t i = 0; i < pattern.length(); ++i) {
    auto donor = pattern.row(Role::DonorAccess)[i];
    auto acc = pattern.row(Role::MiabAccess)[i];
    for (std::size_t k = 0; k < kAllCases.size(); ++k)
      out[i][k] = classify_case(kAllCases[k], donor, acc);
  }
  return out;
}

const std::map<std::string, FramePattern>& builtin_patterns() {
  static const std::map<std::string, FramePattern> patterns = [] {
    using enum SlotDirection;
    constexpr auto X = Silent;
    constexpr auto S = SpecialDownlink;
    std::map<std::string, FramePattern> m;
    m.emplace("no_silence", FramePattern({Downlink, Uplink}, {Downlink, Uplink},
                                         {Uplink, Downlink}));
    m.emplace("with_silence",
              FramePattern({Downlink, Uplink, X, Downlink, X, Uplink, Downlink, X, Uplink, Downlink},
                           {Downlink, X, Uplink, Downlink, Uplink, X, X, Uplink, X, Downlink},
                           {X, Uplink, Downlink, X, Downlink, Uplink, Downlink, Downlink, Uplink, X}));
    m.emplace("macro_only", FramePattern::donor_only({Downlink, S, Uplink, Uplink, Uplink, Downlink,
                                                      S, Uplink, Uplink, Downlink}));
    return m;
  }();
  return patterns;
}

const FramePattern& builtin_pattern(std::string_view name) {
  const auto& all = builtin_patterns();
  auto it = all.find(std::string(name));
  if (it == all.end()) throw PatternNotFound("no built-in frame pattern '" + std::string(name) + "'");
  return it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<SlotDirection> parse_row(std::string_view line) {
  if (auto colon = line.find(':'); colon != std::string_view::npos) line = line.substr(colon + 1);
  std::vector<SlotDirection> row;
  while (true) {
    auto comma = line.find(',');
    auto tok = trim(line.substr(0, comma));
    if (tok.empty()) throw InvalidPattern("empty slot token");
    row.push_back(parse_token(tok));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return row;
}

}  // namespace

FramePattern parse_pattern(std::string_view text) {
  std::vector<std::vector<SlotDirection>> rows;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    rows.push_back(parse_row(line));
  }
  if (rows.size() == 1) return FramePattern::donor_only(std::move(rows[0]));
  if (rows.size() == 3) return FramePattern(std::move(rows[0]), std::move(rows[1]), std::move(rows[2]));
  throw InvalidPattern("pattern needs 1 or 3 rows, got " + std::to_string(rows.size()));
}

FramePattern load_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidPattern("cannot open pattern file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pattern(ss.str());
}

std::string format_pattern(const FramePattern& pattern) {
  std::string out;
  for (Role r : kAllRoles) {
    if (!pattern.has_role(r)) continue;
    out += role_name(r);
    out += ": ";
    const auto& row = pattern.row(r);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ", ";
      out += to_token(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace miab::frame
