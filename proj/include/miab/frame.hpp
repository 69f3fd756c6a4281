#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "miab/common.hpp"

namespace miab::frame {

enum class SlotDirection : std::uint8_t { Downlink, Uplink, SpecialDownlink, Silent };

/// "S" slots carry downlink data for scheduling and accounting.
constexpr bool is_downlink(SlotDirection d) {
  return d == SlotDirection::Downlink || d == SlotDirection::SpecialDownlink;
}
constexpr bool is_uplink(SlotDirection d) { return d == SlotDirection::Uplink; }
constexpr bool is_active(SlotDirection d) { return d != SlotDirection::Silent; }

std::string_view to_token(SlotDirection d);
SlotDirection parse_token(std::string_view token);

enum class Role : std::uint8_t { DonorAccess, Backhaul, MiabAccess };
inline constexpr std::array<Role, 3> kAllRoles{Role::DonorAccess, Role::Backhaul,
                                               Role::MiabAccess};
std::string_view role_name(Role r);

class InvalidPattern : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PatternNotFound : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Cyclic TDD pattern. Donor access is always present; backhaul and mIAB
/// access rows are either both absent (fixed deployments) or have the same
/// length as the donor access row.
class FramePattern {
 public:
  FramePattern() = default;
  FramePattern(std::vector<SlotDirection> donor_access, std::vector<SlotDirection> backhaul,
               std::vector<SlotDirection> miab_access);
  static FramePattern donor_only(std::vector<SlotDirection> donor_access);

  std::size_t length() const { return donor_access_.size(); }
  bool has_miab_rows() const { return !backhaul_.empty(); }
  bool has_role(Role r) const { return r == Role::DonorAccess || has_miab_rows(); }

  const std::vector<SlotDirection>& row(Role r) const;
  SlotDirection at(Role r, SlotIndex slot) const;

  friend bool operator==(const FramePattern&, const FramePattern&) = default;

 private:
  void validate() const;

  std::vector<SlotDirection> donor_access_;
  std::vector<SlotDirection> backhaul_;
  std::vector<SlotDirection> miab_access_;
};

/// Exact non-negative fraction, always reduced.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Fraction operator+(Fraction a, Fraction b);
  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend auto operator<=>(const Fraction& a, const Fraction& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

std::ostream& operator<<(std::ostream& os, const Fraction& f);

struct RoleUsage {
  Fraction dl;
  Fraction ul;
  Fraction total;
  friend bool operator==(const RoleUsage&, const RoleUsage&) = default;
};

struct UsageReport {
  std::map<Role, RoleUsage> roles;
  const RoleUsage& at(Role r) const { return roles.at(r); }
};

UsageReport compute_usage(const FramePattern& pattern);

enum class OperationMode : std::uint8_t {
  ModeA,          // MT receives (backhaul DL) while DU receives (access UL)
  ModeB,          // MT transmits (backhaul UL) while DU transmits (access DL)
  ModeCD,         // opposite actions: self-interference
  SafeBySilence,  // backhaul or mIAB access disabled
};
std::string_view mode_name(OperationMode m);

std::vector<OperationMode> check_self_interference(const FramePattern& pattern);
bool is_self_interference_free(const FramePattern& pattern);

enum class InterferenceCase : std::uint8_t { Case01, Case02, Case03, Case04 };
inline constexpr std::array<InterferenceCase, 4> kAllCases{
    InterferenceCase::Case01, InterferenceCase::Case02, InterferenceCase::Case03,
    InterferenceCase::Case04};
std::string_view case_name(InterferenceCase c);

enum class CaseStatus : std::uint8_t { Possible, AvoidedBySilence, AvoidedByAlignment };
std::string_view status_name(CaseStatus s);

struct CaseLinks {
  Role aggressor;
  Role victim;
  SlotDirection aggressor_dir;  // direction the aggressor's row must have
  SlotDirection victim_dir;
};

/// Cases 01/02 need donor access DL with mIAB access UL;
/// Cases 03/04 need donor access UL with mIAB access DL.
CaseLinks case_links(InterferenceCase c);

using SlotCases = std::array<CaseStatus, 4>;

CaseStatus classify_case(InterferenceCase c, SlotDirection donor_access,
                         SlotDirection miab_access);
std::vector<SlotCases> avoided_cases(const FramePattern& pattern);

/// Named patterns: no_silence, with_silence, macro_only.
const std::map<std::string, FramePattern>& builtin_patterns();
const FramePattern& builtin_pattern(std::string_view name);

/// One role per line, comma separated tokens {DL, UL, S, -}. An optional
/// "label:" prefix on each line is ignored. Blank lines and '#' comments are
/// skipped. One line gives a donor-only pattern, three lines a full one.
FramePattern parse_pattern(std::string_view text);
FramePattern load_pattern_file(const std::string& path);
std::string format_pattern(const FramePattern& pattern);

}  // namespace miab::frame
