#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwdep {

// Largest window length for which the fixed-point signature update stays
// exact in 64-bit arithmetic.
inline constexpr int max_window = 19;

inline constexpr std::uint64_t pow3_table[max_window + 1] = {
    1ull,        3ull,        9ull,         27ull,        81ull,
    243ull,      729ull,      2187ull,      6561ull,      19683ull,
    59049ull,    177147ull,   531441ull,    1594323ull,   4782969ull,
    14348907ull, 43046721ull, 129140163ull, 387420489ull, 1162261467ull};

constexpr std::uint64_t pow3(int k) noexcept { return pow3_table[k]; }

constexpr int hamming_weight(std::uint64_t x) noexcept {
  return std::popcount(x);
}

using uint128 = unsigned __int128;

// Row n of Pascal's triangle, exact. Every entry of row 64 is well inside
// 128 bits.
inline std::vector<uint128> binomial_row(int n) {
  std::vector<uint128> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j > 0; --j) row[j] += row[j - 1];
  return row;
}

inline long double to_long_double(uint128 v) {
  return std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(v >> 64)), 64) +
         static_cast<long double>(static_cast<std::uint64_t>(v));
}

// Half-width of the central weight band whose binomial mass is closest to
// 1/2, ties broken toward the narrower band. Exact integer arithmetic
// throughout: the band mass is compared against 1/2 as |2 * mass - 2^w|.
inline int select_band_halfwidth(int width) {
  if (width < 16 || width > 64 || width % 2 != 0)
    throw std::invalid_argument("word width must be even and in [16, 64]");
  const auto row = binomial_row(width);
  const uint128 whole = uint128(1) << width;
  int best = 0;
  uint128 best_err = whole;
  uint128 band = 0;
  for (int h = 0; h <= width / 2; ++h) {
    if (h == 0)
      band = row[width / 2];
    else
      band += row[width / 2 - h] + row[width / 2 + h];
    const uint128 twice = 2 * band;
    const uint128 err = twice > whole ? twice - whole : whole - twice;
    if (err < best_err) {
      best_err = err;
      best = h;
    }
  }
  return best;
}

struct WordParams {
  int width;
  int half_band;
  int low_threshold;   // weights below this are class 0
  int high_threshold;  // weights above this are class 2

  explicit WordParams(int w, int h = -1)
      : width(w), half_band(h < 0 ? select_band_halfwidth(w) : h) {
    if (width < 16 || width > 64 || width % 2 != 0)
      throw std::invalid_argument("word width must be even and in [16, 64]");
    if (half_band > width / 2)
      throw std::invalid_argument("band half-width exceeds w/2");
    low_threshold = width / 2 - half_band;
    high_threshold = width / 2 + half_band;
  }
};

// Weight class of a word: 0 below the central band, 1 inside it, 2 above.
// Two comparisons against precomputed thresholds.
inline std::uint32_t classify(std::uint64_t x, const WordParams& p) noexcept {
  const int v = std::popcount(x);
  return static_cast<std::uint32_t>(v >= p.low_threshold) +
         static_cast<std::uint32_t>(v > p.high_threshold);
}

// Exact binomial probability of a word falling in the central band.
inline double central_probability(const WordParams& p) {
  const auto row = binomial_row(p.width);
  uint128 band = 0;
  for (int i = p.low_threshold; i <= p.high_threshold; ++i) band += row[i];
  return static_cast<double>(to_long_double(band) * std::ldexp(1.0L, -p.width));
}

inline constexpr std::uint64_t div3_magic = 1431655766ull;  // ceil(2^32 / 3)

// floor(s / 3) as one multiply and one shift; exact for 0 <= s < 3^19.
constexpr std::uint64_t fixed_point_div3(std::uint64_t s) noexcept {
  return (div3_magic * s) >> 32;
}

// Shift the window: drop the oldest trit and append t as the most
// significant base-3 digit. top_power must be 3^(k-1). The digit at 3^0 is
// therefore the oldest class in the window.
constexpr std::uint64_t signature_push(std::uint64_t sig, std::uint32_t trit,
                                       std::uint64_t top_power) noexcept {
  return fixed_point_div3(sig) + trit * top_power;
}

// Signature of a full window recomputed from scratch; reference path for the
// streaming update.
inline std::uint64_t signature_of(std::span<const std::uint64_t> words,
                                  const WordParams& p) {
  const std::uint64_t top = pow3(static_cast<int>(words.size()) - 1);
  std::uint64_t sig = 0;
  for (const auto w : words) sig = signature_push(sig, classify(w, p), top);
  return sig;
}

// Trit string in display order, oldest word's class first (the digit at 3^0).
inline std::string render_signature(std::uint64_t value, int k) {
  std::string out(static_cast<std::size_t>(k), '0');
  for (int i = 0; i < k; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>('0' + value % 3);
    value /= 3;
  }
  return out;
}

}  // namespace hwdep
