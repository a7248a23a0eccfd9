#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "weight_class.hpp"

namespace hwdep {

// C(n, r) in 64-bit, exact for the n <= 19 needed here.
constexpr std::uint64_t small_binomial(int n, int r) noexcept {
  if (r < 0 || r > n) return 0;
  std::uint64_t acc = 1;
  for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
  return acc;
}

// Transformed coordinates grouped by the number of nonzero trits in their
// index. Categories are 1-based; category j holds C(k,j) * 2^j indices for
// j < C and the last category absorbs everything with >= C nonzero trits.
// Index 0 belongs to no category.
struct CategoryScheme {
  int k = 0;
  int categories = 0;
  std::vector<std::uint64_t> sizes;  // sizes[j-1] == |C_j|

  static CategoryScheme make(int k, int categories = 0) {
    if (k < 1 || k > max_window) throw std::invalid_argument("k out of range");
    if (categories <= 0) categories = k / 2 + 1;
    if (categories > k)
      throw std::invalid_argument("more categories than window positions");
    CategoryScheme s;
    s.k = k;
    s.categories = categories;
    s.sizes.resize(static_cast<std::size_t>(categories));
    std::uint64_t assigned = 0;
    for (int j = 1; j < categories; ++j) {
      s.sizes[j - 1] = small_binomial(k, j) << j;
      assigned += s.sizes[j - 1];
    }
    s.sizes[categories - 1] = pow3(k) - 1 - assigned;
    return s;
  }
};

// Category of a signature index: min(nonzero trits, categories).
// Returns 0 for index 0, which is excluded from the combination.
inline int category_of(std::uint64_t index, int k, int categories) noexcept {
  int nonzero = 0;
  for (int i = 0; i < k; ++i) {
    nonzero += index % 3 != 0;
    index /= 3;
  }
  return std::min(nonzero, categories);
}

// (S - nw/2) / sqrt(nw/4): standard normal score of the weight sum of the n
// words recorded for one signature. Signatures that never appeared score
// zero; callers flag such checkpoints as previews.
inline double normal_score(std::uint64_t n, std::uint64_t weight_sum,
                           int width) noexcept {
  if (n == 0) return 0.0;
  const double nw = static_cast<double>(n) * width;
  return (static_cast<double>(weight_sum) - 0.5 * nw) / std::sqrt(0.25 * nw);
}

inline constexpr double inv_sqrt2_const = 0.70710678118654752440;

// Two-sided tail probability of a standard normal score. erfc keeps full
// relative accuracy far below the 1e-20 stopping threshold.
inline double two_sided_pvalue(double score) noexcept {
  return std::erfc(std::fabs(score) * inv_sqrt2_const);
}

// CDF of the minimum of n independent uniforms, 1 - (1 - p)^n, evaluated in
// log space so tiny p come out as ~n*p instead of cancelling.
inline double min_uniform_cdf(double p, std::uint64_t n) noexcept {
  if (p >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-p));
}

struct CombineResult {
  double final_p = 1.0;
  std::uint64_t worst_index = 0;
  int worst_category = 0;
  double worst_p = 1.0;  // minimal coordinate p-value inside that category
};

namespace detail {

constexpr int nonzero_trits(std::uint64_t index, int digits) noexcept {
  int nonzero = 0;
  for (int i = 0; i < digits; ++i) {
    nonzero += index % 3 != 0;
    index /= 3;
  }
  return nonzero;
}

// Nonzero-trit counts through a split lookup so full scans of 3^k
// coordinates stay cheap.
struct TritCountTables {
  std::uint64_t low_size;
  std::vector<std::uint8_t> low, high;

  explicit TritCountTables(int k) {
    const int low_digits = k / 2;
    low_size = pow3(low_digits);
    const std::uint64_t high_size = pow3(k - low_digits);
    low.resize(low_size);
    high.resize(high_size);
    for (std::uint64_t i = 0; i < low_size; ++i)
      low[i] = static_cast<std::uint8_t>(nonzero_trits(i, low_digits));
    for (std::uint64_t i = 0; i < high_size; ++i)
      high[i] = static_cast<std::uint8_t>(nonzero_trits(i, k - low_digits));
  }

  int count(std::uint64_t index) const noexcept {
    return high[index / low_size] + low[index % low_size];
  }
};

inline CombineResult compose_categories(const std::vector<double>& min_p,
                                        const std::vector<std::uint64_t>& argmin,
                                        const CategoryScheme& scheme) {
  CombineResult out;
  double best = std::numeric_limits<double>::infinity();
  int best_j = 1;
  for (int j = 1; j <= scheme.categories; ++j) {
    const double cat_p = min_uniform_cdf(min_p[j - 1], scheme.sizes[j - 1]);
    if (cat_p < best) {
      best = cat_p;
      best_j = j;
    }
  }
  out.final_p = min_uniform_cdf(best, static_cast<std::uint64_t>(scheme.categories));
  out.worst_category = best_j;
  out.worst_index = argmin[best_j - 1];
  out.worst_p = min_p[best_j - 1];
  return out;
}

}  // namespace detail

// Combination over explicit coordinate p-values. ps holds 3^k entries
// indexed by signature value; entry 0 is ignored.
inline CombineResult combine_pvalues(std::span<const double> ps,
                                     const CategoryScheme& scheme) {
  if (ps.size() != pow3(scheme.k))
    throw std::invalid_argument("p-value vector does not match the scheme");
  detail::TritCountTables tables(scheme.k);
  std::vector<double> min_p(scheme.categories, 2.0);
  std::vector<std::uint64_t> argmin(scheme.categories, 0);
  for (std::uint64_t i = 1; i < ps.size(); ++i) {
    const int j = std::min(tables.count(i), scheme.categories);
    if (ps[i] < min_p[j - 1]) {
      min_p[j - 1] = ps[i];
      argmin[j - 1] = i;
    }
  }
  return detail::compose_categories(min_p, argmin, scheme);
}

// Same combination taken from transformed scores: the minimal p-value of a
// category is the p-value of its extreme |score|, so no per-coordinate
// p-values are materialized.
inline CombineResult combine_scores(std::span<const double> transformed,
                                    const CategoryScheme& scheme) {
  if (transformed.size() != pow3(scheme.k))
    throw std::invalid_argument("score vector does not match the scheme");
  detail::TritCountTables tables(scheme.k);
  std::vector<double> max_abs(scheme.categories, -1.0);
  std::vector<std::uint64_t> argmax(scheme.categories, 0);
  for (std::uint64_t i = 1; i < transformed.size(); ++i) {
    const int j = std::min(tables.count(i), scheme.categories);
    const double a = std::fabs(transformed[i]);
    if (a > max_abs[j - 1]) {
      max_abs[j - 1] = a;
      argmax[j - 1] = i;
    }
  }
  std::vector<double> min_p(scheme.categories, 1.0);
  for (int j = 0; j < scheme.categories; ++j)
    min_p[j] = two_sided_pvalue(max_abs[j] < 0 ? 0.0 : max_abs[j]);
  return detail::compose_categories(min_p, argmax, scheme);
}

struct TestReport {
  std::uint64_t bytes_processed = 0;
  double final_p = 1.0;
  std::string worst_signature;
  int worst_category = 0;
  double worst_coordinate_p = 1.0;
  bool preview = false;
  bool transitional = false;
};

}  // namespace hwdep
