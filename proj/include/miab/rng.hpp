#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <string_view>

namespace miab {

/// SplitMix64 bit generator. Cheap to construct, which lets every
/// (run, stream, entity, epoch) tuple own an independent substream, so
/// parallel and serial evaluation draw identical numbers.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t h, std::uint64_t v) {
  SplitMix64 g(h ^ (v + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2)));
  return g();
}

/// FNV-1a over a tag; stable across platforms.
inline constexpr std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

/// Derives a named substream from a run seed and a list of keys.
inline SplitMix64 substream(std::uint64_t seed, std::string_view tag,
                            std::initializer_list<std::uint64_t> keys = {}) {
  std::uint64_t h = mix64(seed, tag_hash(tag));
  for (auto k : keys) h = mix64(h, k);
  return SplitMix64(h);
}

inline double uniform01(SplitMix64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double standard_normal(SplitMix64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(g);
}

}  // namespace miab
