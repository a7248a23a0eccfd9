#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "counters.hpp"
#include "weight_class.hpp"

namespace hwdep {

// Probabilities this small cannot influence thresholds in the 1e-100 range;
// flushing them keeps the iteration sparse.
inline constexpr double chain_epsilon = 1e-320;

// Stationary distribution of the length of the trailing run of central
// trits, lumped at k-1.
inline std::vector<double> suffix_steady_state(double p, int k) {
  if (!(p > 0.0 && p < 1.0) || k < 1)
    throw std::invalid_argument("need 0 < p < 1 and k >= 1");
  std::vector<double> pi(static_cast<std::size_t>(k));
  double pj = 1.0;
  for (int j = 0; j < k - 1; ++j) {
    pi[j] = (1.0 - p) * pj;
    pj *= p;
  }
  pi[k - 1] = pj;
  return pi;
}

// Distribution of the number of passages through the all-central signature
// after `steps` words, with counts at `bound` and beyond lumped together.
struct PassageDistribution {
  std::uint64_t steps = 0;
  std::uint32_t bound = 0;
  std::vector<double> probs;   // bound + 1 entries
  std::size_t lo = 0, hi = 0;  // active (nonzero) index window

  double overflow_probability() const noexcept { return probs[bound]; }
};

// Markov chain over states (c, j): c passages counted so far (lumped at the
// bound) and a trailing run of j central trits (j lumped at k-1, since one
// more central trit bumps the passage count either way). Started from the
// stationary run-length distribution, i.e. from an infinitely long random
// past.
class OverflowChain {
 public:
  OverflowChain(double central_p, int window, std::uint32_t bound)
      : p_(central_p),
        k_(window),
        b_(bound),
        q_((static_cast<std::size_t>(bound) + 1) * window, 0.0),
        col_top_(static_cast<std::size_t>(bound) + 1, 0.0) {
    if (bound < 1) throw std::invalid_argument("bound must be positive");
    const auto pi = suffix_steady_state(p_, k_);
    std::copy(pi.begin(), pi.end(), q_.begin());
  }

  // One exact step: a non-central trit (probability 1-p) resets the run; a
  // central trit extends it, bumping the passage count when the run is
  // already at k-1.
  void step() noexcept {
    const double stay = p_;
    const double reset = 1.0 - p_;
    const std::size_t new_hi = std::min<std::size_t>(b_, c_hi_ + 1);
    for (std::size_t c = c_lo_; c <= c_hi_; ++c)
      col_top_[c] = q_[c * k_ + (k_ - 1)];
    for (std::size_t c = c_lo_; c <= new_hi; ++c) {
      double* const r = &q_[c * k_];
      double rowsum = 0.0;
      for (int j = 0; j < k_; ++j) rowsum += r[j];
      double inflow = 0.0;
      if (c > c_lo_ && c - 1 <= c_hi_) inflow += stay * col_top_[c - 1];
      if (c == b_ && b_ >= c_lo_ && b_ <= c_hi_) inflow += stay * col_top_[b_];
      if (k_ == 1) {
        r[0] = reset * rowsum + inflow;
      } else {
        for (int j = k_ - 1; j >= 1; --j) r[j] = stay * r[j - 1];
        r[k_ - 1] += inflow;
        r[0] = reset * rowsum;
      }
      for (int j = 0; j < k_; ++j)
        if (r[j] < chain_epsilon) r[j] = 0.0;
    }
    if (new_hi > c_hi_ && row_nonzero(new_hi)) c_hi_ = new_hi;
    while (c_lo_ < c_hi_ && !row_nonzero(c_lo_)) ++c_lo_;
    ++steps_;
  }

  double overflow_probability() const noexcept {
    if (c_hi_ < b_) return 0.0;
    const double* const r = &q_[static_cast<std::size_t>(b_) * k_];
    double s = 0.0;
    for (int j = 0; j < k_; ++j) s += r[j];
    return s;
  }

  double total_mass() const noexcept {
    double s = 0.0;
    for (std::size_t c = c_lo_; c <= c_hi_; ++c)
      for (int j = 0; j < k_; ++j) s += q_[c * k_ + j];
    return s;
  }

  PassageDistribution passage_distribution() const {
    PassageDistribution d;
    d.steps = steps_;
    d.bound = b_;
    d.probs.assign(static_cast<std::size_t>(b_) + 1, 0.0);
    for (std::size_t c = c_lo_; c <= c_hi_; ++c) {
      double s = 0.0;
      for (int j = 0; j < k_; ++j) s += q_[c * k_ + j];
      d.probs[c] = s;
    }
    d.lo = c_lo_;
    d.hi = c_hi_;
    return d;
  }

  std::uint64_t steps() const noexcept { return steps_; }
  double state(std::size_t c, int j) const noexcept { return q_[c * k_ + j]; }
  std::uint32_t bound() const noexcept { return b_; }

 private:
  bool row_nonzero(std::size_t c) const noexcept {
    const double* const r = &q_[c * k_];
    for (int j = 0; j < k_; ++j)
      if (r[j] != 0.0) return true;
    return false;
  }

  double p_;
  int k_;
  std::uint32_t b_;
  std::uint64_t steps_ = 0;
  std::size_t c_lo_ = 0, c_hi_ = 0;
  std::vector<double> q_;
  std::vector<double> col_top_;
};

// Passage distribution over u + v steps from the distributions over u and v
// steps, treating the two stretches as independent (the chain is assumed to
// re-enter its stationary regime, which it does quickly for large u).
inline PassageDistribution convolve_passages(const PassageDistribution& a,
                                             const PassageDistribution& b) {
  if (a.bound != b.bound || a.bound == 0)
    throw std::invalid_argument("mismatched passage distributions");
  const std::size_t bound = a.bound;
  PassageDistribution out;
  out.steps = a.steps + b.steps;
  out.bound = a.bound;
  out.probs.assign(bound + 1, 0.0);

  std::vector<double> sfx(b.hi + 2, 0.0);
  for (std::size_t g = b.hi + 1; g-- > b.lo;) sfx[g] = sfx[g + 1] + b.probs[g];
  const auto suffix_from = [&](std::size_t g) {
    if (g <= b.lo) return sfx[b.lo];
    if (g > b.hi) return 0.0;
    return sfx[g];
  };

  for (std::size_t c = a.lo + b.lo; c < bound && c <= a.hi + b.hi; ++c) {
    const std::size_t f_lo = std::max(a.lo, c > b.hi ? c - b.hi : 0);
    const std::size_t f_hi = std::min(a.hi, c - b.lo);
    double acc = 0.0;
    for (std::size_t f = f_lo; f <= f_hi; ++f)
      acc += a.probs[f] * b.probs[c - f];
    out.probs[c] = acc < chain_epsilon ? 0.0 : acc;
  }
  double tail = 0.0;
  for (std::size_t f = a.lo; f <= a.hi; ++f)
    tail += a.probs[f] * suffix_from(bound > f ? bound - f : 0);
  out.probs[bound] = tail;

  out.lo = 0;
  out.hi = bound;
  while (out.lo < bound && out.probs[out.lo] == 0.0) ++out.lo;
  while (out.hi > out.lo && out.probs[out.hi] == 0.0) --out.hi;
  return out;
}

// Number of exact chain steps taken before switching to the doubling
// scheme; also the granularity of the batch-size search grid beyond it.
inline constexpr std::uint64_t batch_base_steps = 1000000;

// Largest batch size whose probability of overflowing the packed counter of
// the most frequent signature stays below the threshold (default
// 1e-100 / 3^k, so a whole run stays below 1e-100). Exact iteration up to
// batch_base_steps, then doubled blocks combined per the binary digits of
// the multiplier, binary-searched over multiples of the base block.
inline std::uint64_t compute_batch_size(int width, int k, int count_bits = 0,
                                        double threshold = 0.0) {
  if (k < 1 || k > max_window) throw std::invalid_argument("k out of range");
  const WordParams params(width);
  if (count_bits <= 0) count_bits = count_bits_for_width(width);
  if (threshold <= 0.0) threshold = 1e-100 / static_cast<double>(pow3(k));
  const double p = central_probability(params);
  const std::uint32_t bound = std::uint32_t(1) << count_bits;

  OverflowChain chain(p, k, bound);
  for (std::uint64_t u = 1; u <= batch_base_steps; ++u) {
    chain.step();
    if (chain.overflow_probability() >= threshold) return u - 1;
  }

  std::vector<PassageDistribution> blocks;  // blocks[h]: 2^h * base steps
  blocks.push_back(chain.passage_distribution());
  while (blocks.back().overflow_probability() < threshold) {
    if (blocks.size() > 48) throw std::runtime_error("batch size search diverged");
    blocks.push_back(convolve_passages(blocks.back(), blocks.back()));
  }
  const std::size_t top = blocks.size() - 1;

  const auto overflow_at = [&](std::uint64_t multiple) {
    PassageDistribution acc;
    bool have = false;
    for (std::size_t h = 0; h < blocks.size(); ++h) {
      if (!(multiple >> h & 1)) continue;
      acc = have ? convolve_passages(acc, blocks[h]) : blocks[h];
      have = true;
    }
    return acc.overflow_probability();
  };

  std::uint64_t lo = std::uint64_t(1) << (top - 1);  // below the threshold
  std::uint64_t hi = std::uint64_t(1) << top;        // at or above it
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (overflow_at(mid) < threshold)
      lo = mid;
    else
      hi = mid;
  }
  return lo * batch_base_steps;
}

}  // namespace hwdep
