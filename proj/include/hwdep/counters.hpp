#pragma once

#include <cstdint>
#include <vector>

#include "weight_class.hpp"

namespace hwdep {

constexpr int count_bits_for_width(int width) noexcept {
  return width == 16 ? 14 : 13;
}

// 3^k packed cells: occurrence count in the high bits, weight sum in the low
// bits, so one 32-bit addition updates both fields. The layout is safe
// within a certified batch: the sum field cannot carry into the count field
// unless the count field itself would overflow (2^13 * 64 == 2^19 and
// 2^14 * 16 == 2^18), and a wrapped count is caught by the batch checksum.
class PackedCounterArray {
 public:
  PackedCounterArray(int k, int width)
      : sum_bits_(32 - count_bits_for_width(width)),
        cells_(pow3(k), 0u) {}

  void record(std::uint64_t signature, std::uint32_t weight) noexcept {
    cells_[signature] += (std::uint32_t(1) << sum_bits_) + weight;
  }

  std::uint32_t cell(std::size_t i) const noexcept { return cells_[i]; }
  void clear_cell(std::size_t i) noexcept { cells_[i] = 0; }
  std::size_t size() const noexcept { return cells_.size(); }
  int sum_bits() const noexcept { return sum_bits_; }
  std::uint32_t count_field(std::size_t i) const noexcept {
    return cells_[i] >> sum_bits_;
  }
  std::uint32_t sum_field(std::size_t i) const noexcept {
    return cells_[i] & ((std::uint32_t(1) << sum_bits_) - 1);
  }

 private:
  int sum_bits_;
  std::vector<std::uint32_t> cells_;
};

struct LargeAccumulator {
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> sums;
  std::uint64_t total_words = 0;

  explicit LargeAccumulator(int k) : counts(pow3(k), 0), sums(pow3(k), 0) {}
};

enum class FlushResult { ok, overflow_detected };

// Fold a finished batch into the large accumulator and zero the packed
// cells. The count fields must sum to the number of records in the batch;
// any counter wrap breaks that checksum and is reported instead of folded.
inline FlushResult flush_batch(PackedCounterArray& arr, LargeAccumulator& acc,
                               std::uint64_t expected_records) {
  const std::size_t n = arr.size();
  const int sum_bits = arr.sum_bits();
  const std::uint32_t sum_mask = (std::uint32_t(1) << sum_bits) - 1;
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < n; ++s) total += arr.cell(s) >> sum_bits;
  if (total != expected_records) return FlushResult::overflow_detected;
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint32_t cell = arr.cell(s);
    if (cell == 0) continue;
    acc.counts[s] += cell >> sum_bits;
    acc.sums[s] += cell & sum_mask;
    arr.clear_cell(s);
  }
  acc.total_words += expected_records;
  return FlushResult::ok;
}

}  // namespace hwdep
