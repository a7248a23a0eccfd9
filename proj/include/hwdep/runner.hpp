#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "batch_table.hpp"
#include "counters.hpp"
#include "generators.hpp"
#include "transform.hpp"
#include "weight_class.hpp"
#include "word_source.hpp"

namespace hwdep {

struct SourceSpec {
  enum class Kind { builtin, file, stdin_stream, memory };
  Kind kind = Kind::builtin;
  Family family = Family::control;
  std::uint64_t seed = 1;
  std::string path;
  std::span<const unsigned char> bytes;  // memory sources only
};

struct CheckpointSchedule {
  std::vector<std::uint64_t> at_bytes;  // explicit marks; empty -> geometric
  double factor = 2.0;
};

struct TestConfig {
  int w = 64;
  int k = 8;
  int half_band = -1;          // -1: band chosen from w
  int categories = -1;         // -1: k/2 + 1
  std::uint64_t batch_size = 0;  // 0: certified value for (w, k)
  bool unsafe_batch = false;   // required to override the certified batch
  std::uint64_t max_bytes = 0;   // 0: unlimited
  double p_threshold = 1e-20;
  bool transitional = false;
  SplitMode split = SplitMode::whole;
  SourceSpec source;
  CheckpointSchedule checkpoints;
};

enum class Verdict { pass_so_far, fail, overflow };

struct RunResult {
  Verdict verdict = Verdict::pass_so_far;
  TestReport last_report;
  std::uint64_t bytes_processed = 0;
  std::uint64_t words_processed = 0;
};

using ReportCallback = std::function<void(const TestReport&)>;

inline std::string render_report(const TestReport& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%14llu bytes  p = %.3e  worst = %s%s  category = %d%s",
                static_cast<unsigned long long>(r.bytes_processed), r.final_p,
                r.worst_signature.c_str(),
                r.transitional ? " (transitional)" : "", r.worst_category,
                r.preview ? "  [preview]" : "");
  return buf;
}

namespace detail {

struct ResolvedConfig {
  WordParams params;
  CategoryScheme scheme;
  std::uint64_t batch_size;
  std::uint64_t max_words;
};

inline ResolvedConfig resolve_config(const TestConfig& cfg) {
  if (cfg.w != 16 && cfg.w != 32 && cfg.w != 64)
    throw std::invalid_argument("word width must be 16, 32 or 64");
  if (cfg.k < 1 || cfg.k > max_window)
    throw std::invalid_argument("k must be in [1, 19]");
  if (!(cfg.p_threshold > 0.0 && cfg.p_threshold < 1.0))
    throw std::invalid_argument("p threshold must be in (0, 1)");
  if (cfg.checkpoints.at_bytes.empty() && !(cfg.checkpoints.factor > 1.0))
    throw std::invalid_argument("checkpoint factor must exceed 1");
  if (cfg.source.kind == SourceSpec::Kind::builtin) {
    const bool needs_whole = cfg.w == 64;
    if (cfg.w == 16)
      throw std::invalid_argument("built-in generators emit 64-bit output; w=16 needs a raw stream");
    if (needs_whole && cfg.split != SplitMode::whole)
      throw std::invalid_argument("w=64 uses the whole output; drop --split");
    if (!needs_whole && cfg.split == SplitMode::whole)
      throw std::invalid_argument("w=32 from a 64-bit generator needs --split low|high|halves|interleave");
  } else if (cfg.split != SplitMode::whole) {
    throw std::invalid_argument("raw streams are already w-bit words; split modes do not apply");
  }

  std::uint64_t batch = cfg.batch_size;
  if (batch == 0) {
    batch = certified_batch_size(cfg.w, cfg.k);
  } else if (!cfg.unsafe_batch) {
    throw std::invalid_argument("overriding the certified batch size requires --unsafe-batch");
  }
  if (batch == 0) throw std::invalid_argument("batch size must be positive");

  ResolvedConfig r{WordParams(cfg.w, cfg.half_band),
                   CategoryScheme::make(cfg.k, cfg.categories < 0 ? 0 : cfg.categories),
                   batch,
                   cfg.max_bytes == 0 ? ~std::uint64_t(0)
                                      : cfg.max_bytes / (static_cast<std::uint64_t>(cfg.w) / 8)};
  return r;
}

inline TestReport analyze(const LargeAccumulator& acc, const ResolvedConfig& rc,
                          std::uint64_t bytes, bool transitional) {
  const std::size_t n = acc.counts.size();
  std::vector<double> scores(n);
  bool preview = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (acc.counts[i] < 30) preview = true;
    scores[i] = normal_score(acc.counts[i], acc.sums[i], rc.params.width);
  }
  transform_inplace(scores);
  const CombineResult comb = combine_scores(scores, rc.scheme);
  TestReport report;
  report.bytes_processed = bytes;
  report.final_p = comb.final_p;
  report.worst_signature = render_signature(comb.worst_index, rc.scheme.k);
  report.worst_category = comb.worst_category;
  report.worst_coordinate_p = comb.worst_p;
  report.preview = preview;
  report.transitional = transitional;
  return report;
}

// Tracks when the next analysis is due, in bytes. With no explicit marks the
// schedule is geometric: report at the first batch boundary, then whenever
// the byte count has grown by the configured factor.
class CheckpointTracker {
 public:
  explicit CheckpointTracker(const CheckpointSchedule& s) : schedule_(s) {
    target_ = schedule_.at_bytes.empty() ? 1 : schedule_.at_bytes.front();
  }

  bool due(std::uint64_t bytes) const noexcept { return bytes >= target_; }

  void reported(std::uint64_t bytes) noexcept {
    if (schedule_.at_bytes.empty()) {
      const double next = static_cast<double>(bytes) * schedule_.factor;
      target_ = std::max(bytes + 1, static_cast<std::uint64_t>(next));
      return;
    }
    while (idx_ < schedule_.at_bytes.size() && schedule_.at_bytes[idx_] <= bytes)
      ++idx_;
    target_ = idx_ < schedule_.at_bytes.size() ? schedule_.at_bytes[idx_]
                                               : ~std::uint64_t(0);
  }

 private:
  CheckpointSchedule schedule_;
  std::uint64_t target_ = 1;
  std::size_t idx_ = 0;
};

template <class Source>
RunResult run_loop(Source& src, const TestConfig& cfg, const ResolvedConfig& rc,
                   const ReportCallback& on_report) {
  PackedCounterArray packed(cfg.k, cfg.w);
  LargeAccumulator acc(cfg.k);
  const std::uint64_t top_power = pow3(cfg.k - 1);
  const std::uint64_t word_bytes = static_cast<std::uint64_t>(cfg.w) / 8;
  const WordParams wp = rc.params;
  CheckpointTracker checkpoints(cfg.checkpoints);

  RunResult result;
  std::uint64_t sig = 0;
  std::uint64_t words = 0;
  std::uint64_t in_batch = 0;
  std::uint64_t last_reported_words = ~std::uint64_t(0);
  std::uint64_t x = 0;

  const auto emit = [&](const TestReport& report) {
    result.last_report = report;
    last_reported_words = words;
    if (on_report) on_report(report);
  };

  const auto overflow_report = [&]() {
    // The checksum mismatch itself is an event of probability <= 1e-100
    // under the null hypothesis; attribute it to the fullest cell.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < packed.size(); ++i)
      if (packed.count_field(i) > packed.count_field(worst)) worst = i;
    TestReport report;
    report.bytes_processed = words * word_bytes;
    report.final_p = 1e-100;
    report.worst_signature = render_signature(worst, cfg.k);
    report.worst_category = category_of(worst, cfg.k, rc.scheme.categories);
    report.worst_coordinate_p = 1e-100;
    report.preview = false;
    report.transitional = cfg.transitional;
    emit(report);
    result.verdict = Verdict::overflow;
  };

  int fill = 0;
  while (fill < cfg.k && words < rc.max_words && src.next(x)) {
    sig = signature_push(sig, classify(x, wp), top_power);
    ++fill;
    ++words;
  }

  if (fill == cfg.k) {
    while (words < rc.max_words && src.next(x)) {
      ++words;
      packed.record(sig, static_cast<std::uint32_t>(hamming_weight(x)));
      sig = signature_push(sig, classify(x, wp), top_power);
      if (++in_batch == rc.batch_size) {
        if (flush_batch(packed, acc, in_batch) == FlushResult::overflow_detected) {
          overflow_report();
          result.bytes_processed = words * word_bytes;
          result.words_processed = words;
          return result;
        }
        in_batch = 0;
        const std::uint64_t bytes = words * word_bytes;
        if (checkpoints.due(bytes)) {
          emit(analyze(acc, rc, bytes, cfg.transitional));
          checkpoints.reported(bytes);
          if (result.last_report.final_p < cfg.p_threshold) {
            result.verdict = Verdict::fail;
            result.bytes_processed = bytes;
            result.words_processed = words;
            return result;
          }
        }
      }
    }
  }

  // End of stream or byte budget: fold the partial batch and report once
  // more unless this word count was already reported.
  if (in_batch > 0) {
    if (flush_batch(packed, acc, in_batch) == FlushResult::overflow_detected) {
      overflow_report();
      result.bytes_processed = words * word_bytes;
      result.words_processed = words;
      return result;
    }
    in_batch = 0;
  }
  result.bytes_processed = words * word_bytes;
  result.words_processed = words;
  if (words != last_reported_words) {
    emit(analyze(acc, rc, result.bytes_processed, cfg.transitional));
    if (result.last_report.final_p < cfg.p_threshold) {
      result.verdict = Verdict::fail;
      return result;
    }
  } else if (result.last_report.final_p < cfg.p_threshold) {
    result.verdict = Verdict::fail;
    return result;
  }
  result.verdict = Verdict::pass_so_far;
  return result;
}

template <class Source>
RunResult run_with_source(Source src, const TestConfig& cfg,
                          const ResolvedConfig& rc, const ReportCallback& cb) {
  if (cfg.transitional) {
    TransitionalSource<Source> filtered(std::move(src), cfg.w);
    return run_loop(filtered, cfg, rc, cb);
  }
  return run_loop(src, cfg, rc, cb);
}

}  // namespace detail

inline void validate_config(const TestConfig& cfg) {
  (void)detail::resolve_config(cfg);
}

// Streams the configured source through the classifier and counters,
// analyzing at checkpoints, until the p-value crosses the threshold, the
// byte budget is exhausted, the source ends, or a counter overflows.
inline RunResult run_test(const TestConfig& cfg, const ReportCallback& on_report = {}) {
  const detail::ResolvedConfig rc = detail::resolve_config(cfg);
  switch (cfg.source.kind) {
    case SourceSpec::Kind::builtin: {
      const SplitMode split = cfg.split;
      const std::uint64_t seed = cfg.source.seed;
      switch (cfg.source.family) {
        case Family::xorshift128:
          return detail::run_with_source(
              GeneratorSource<Xorshift128>(Xorshift128(seed), split), cfg, rc, on_report);
        case Family::xorshift128plus:
          return detail::run_with_source(
              GeneratorSource<Xorshift128Plus>(Xorshift128Plus(seed), split), cfg, rc, on_report);
        case Family::xorshift1024:
          return detail::run_with_source(
              GeneratorSource<Xorshift1024>(Xorshift1024(seed), split), cfg, rc, on_report);
        case Family::xorshift1024plus:
          return detail::run_with_source(
              GeneratorSource<Xorshift1024Plus>(Xorshift1024Plus(seed), split), cfg, rc, on_report);
        case Family::xoroshiro128:
          return detail::run_with_source(
              GeneratorSource<Xoroshiro128>(Xoroshiro128(seed), split), cfg, rc, on_report);
        case Family::xoroshiro128plus:
          return detail::run_with_source(
              GeneratorSource<Xoroshiro128Plus>(Xoroshiro128Plus(seed), split), cfg, rc, on_report);
        case Family::xoroshiro1024:
          return detail::run_with_source(
              GeneratorSource<Xoroshiro1024>(Xoroshiro1024(seed), split), cfg, rc, on_report);
        case Family::xoroshiro1024plus:
          return detail::run_with_source(
              GeneratorSource<Xoroshiro1024Plus>(Xoroshiro1024Plus(seed), split), cfg, rc, on_report);
        case Family::control:
          return detail::run_with_source(
              GeneratorSource<SplitMix64>(SplitMix64(seed), split), cfg, rc, on_report);
      }
      throw std::invalid_argument("unknown generator family");
    }
    case SourceSpec::Kind::file:
      return detail::run_with_source(RawWordSource::open(cfg.source.path, cfg.w),
                                     cfg, rc, on_report);
    case SourceSpec::Kind::stdin_stream:
      return detail::run_with_source(RawWordSource::from_stdin(cfg.w), cfg, rc,
                                     on_report);
    case SourceSpec::Kind::memory:
      return detail::run_with_source(MemoryWordSource(cfg.source.bytes, cfg.w),
                                     cfg, rc, on_report);
  }
  throw std::invalid_argument("unknown source kind");
}

}  // namespace hwdep
