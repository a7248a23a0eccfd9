#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace hwdep {

namespace detail {

inline const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
inline const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
inline const double inv_sqrt6 = 1.0 / std::sqrt(6.0);

// One mixing pass over three consecutive blocks, then recurse into each
// block with a third of the stride.
inline void transform_rec(double* v, std::size_t block) noexcept {
  double* const mid = v + block;
  double* const high = mid + block;
  for (std::size_t i = 0; i < block; ++i) {
    const double a = v[i], b = mid[i], c = high[i];
    v[i] = (a + b + c) * inv_sqrt3;
    mid[i] = (a - c) * inv_sqrt2;
    high[i] = (a - 2.0 * b + c) * inv_sqrt6;
  }
  if ((block /= 3) != 0) {
    transform_rec(v, block);
    transform_rec(mid, block);
    transform_rec(high, block);
  }
}

}  // namespace detail

// The 3x3 unitary mixing matrix, row-vector convention (v' = v * M).
inline std::array<std::array<double, 3>, 3> base_matrix() {
  using detail::inv_sqrt2;
  using detail::inv_sqrt3;
  using detail::inv_sqrt6;
  return {{{inv_sqrt3, inv_sqrt2, inv_sqrt6},
           {inv_sqrt3, 0.0, -2.0 * inv_sqrt6},
           {inv_sqrt3, -inv_sqrt2, inv_sqrt6}}};
}

// In-place multiplication of v by the k-th Kronecker power of base_matrix(),
// where v.size() == 3^k. Indices are base-3 numerals; the most significant
// trit selects the top-level block.
inline void transform_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  std::size_t block = 1;
  while (block < n) block *= 3;
  if (n == 0 || block != n)
    throw std::invalid_argument("transform length must be a power of 3");
  if (n == 1) return;  // zeroth Kronecker power is the identity
  detail::transform_rec(v.data(), n / 3);
}

}  // namespace hwdep
