// Acceptance suite: one line per criterion, nonzero exit when any fail.
// argv[1] must be the path to the command-line binary (used by the overflow
// exit-code criterion). Set HWDEP_EXTENDED=1 to include the hours-scale
// reproductions, which are skipped by default.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "hwdep/hwdep.hpp"

using namespace hwdep;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s — %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void skip(int id, const std::string& detail) {
  std::printf("criterion %2d: SKIP — %s\n", id, detail.c_str());
  std::fflush(stdout);
}

std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double uniform01(SplitMix64& gen) {
  return std::ldexp(static_cast<double>(gen.next() >> 11), -53);
}

// ---- criterion 1: transform vs dense Kronecker oracle --------------------

std::vector<std::vector<double>> kronecker_power(int k) {
  const auto m = base_matrix();
  std::vector<std::vector<double>> t{{1.0}};
  for (int step = 0; step < k; ++step) {
    const std::size_t n = t.size();
    std::vector<std::vector<double>> next(3 * n, std::vector<double>(3 * n));
    for (std::size_t r = 0; r < 3 * n; ++r)
      for (std::size_t c = 0; c < 3 * n; ++c)
        next[r][c] = m[r / n][c / n] * t[r % n][c % n];
    t = std::move(next);
  }
  return t;
}

void criterion_transform() {
  SplitMix64 gen(1001);
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const auto t = kronecker_power(k);
    const std::size_t n = pow3(k);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> v(n);
      for (auto& x : v) x = 2.0 * uniform01(gen) - 1.0;
      std::vector<double> expected(n, 0.0);
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) expected[c] += v[r] * t[r][c];
      transform_inplace(v);
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::fabs(v[i] - expected[i]));
    }
  }
  double worst_norm = 0.0;
  for (int k = 1; k <= 10; ++k) {
    std::vector<double> v(pow3(k));
    for (auto& x : v) x = 2.0 * uniform01(gen) - 1.0;
    double before = 0.0;
    for (const double x : v) before += x * x;
    transform_inplace(v);
    double after = 0.0;
    for (const double x : v) after += x * x;
    worst_norm = std::max(worst_norm, std::fabs(std::sqrt(after) / std::sqrt(before) - 1.0));
  }
  report(1, worst < 1e-12 && worst_norm < 1e-10,
         format("dense-oracle max err %.2e (< 1e-12), norm drift %.2e (< 1e-10)",
                worst, worst_norm));
}

void criterion_base_matrix() {
  const auto m = base_matrix();
  double worst = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double dot = 0.0;
      for (int i = 0; i < 3; ++i) dot += m[r][i] * m[c][i];
      worst = std::max(worst, std::fabs(dot - (r == c ? 1.0 : 0.0)));
    }
  report(2, worst < 1e-15, format("max |M*Mt - I| = %.2e (< 1e-15)", worst));
}

void criterion_div3() {
  std::uint64_t bad = 0;
  for (std::uint64_t s = 0; s < pow3(12); ++s)
    if (fixed_point_div3(s) != s / 3) ++bad;
  SplitMix64 gen(1003);
  for (int i = 0; i < 1000000; ++i) {
    const std::uint64_t s = gen.next() % pow3(19);
    if (fixed_point_div3(s) != s / 3) ++bad;
  }
  report(3, bad == 0,
         format("exhaustive s < 3^12 plus 1e6 random s < 3^19, %" PRIu64 " mismatches", bad));
}

void criterion_counter_oracle() {
  const int k = 8;
  const WordParams params(64);
  const std::uint64_t n_cells = pow3(k);
  PackedCounterArray arr(k, 64);
  LargeAccumulator acc(k);
  std::vector<std::uint64_t> ref_counts(n_cells, 0), ref_sums(n_cells, 0);
  SplitMix64 gen(1004);
  std::uint64_t sig = 0, in_batch = 0;
  for (int i = 0; i < k; ++i)
    sig = signature_push(sig, classify(gen.next(), params), pow3(k - 1));
  const std::uint64_t batch = certified_batch_size(64, k);
  bool flush_ok = true;
  for (std::uint64_t i = 0; i < 10000000; ++i) {
    const std::uint64_t x = gen.next();
    const auto weight = static_cast<std::uint32_t>(hamming_weight(x));
    arr.record(sig, weight);
    ref_counts[sig] += 1;
    ref_sums[sig] += weight;
    sig = signature_push(sig, classify(x, params), pow3(k - 1));
    if (++in_batch == batch) {
      flush_ok &= flush_batch(arr, acc, in_batch) == FlushResult::ok;
      in_batch = 0;
    }
  }
  if (in_batch > 0) flush_ok &= flush_batch(arr, acc, in_batch) == FlushResult::ok;
  std::uint64_t mismatches = 0;
  for (std::uint64_t s = 0; s < n_cells; ++s)
    mismatches += acc.counts[s] != ref_counts[s] || acc.sums[s] != ref_sums[s];
  report(4, flush_ok && mismatches == 0,
         format("1e7 words at k=8: %" PRIu64 " cell mismatches against the naive reference",
                mismatches));
}

void criterion_batch_sizes() {
  struct Case {
    int k;
    std::uint64_t lo, hi;
  };
  const Case cases[] = {{1, 11000, 19000},
                        {8, 17000000, 29000000},
                        {16, 750000000, 1250000000}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t b = compute_batch_size(64, c.k);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_band = b >= c.lo && b <= c.hi;
    const bool matches_table = certified_batch_size(64, c.k) == b;
    pass &= in_band && matches_table;
    detail += format("k=%d: B=%" PRIu64 " band [%" PRIu64 ", %" PRIu64 "]%s%s (%.0fs); ",
                     c.k, b, c.lo, c.hi, in_band ? " ok" : " OUT",
                     matches_table ? "" : " table-stale", secs);
  }
  report(5, pass, detail);
}

// ---- criterion 6: chain vs exhaustive enumeration -------------------------

std::vector<double> enumerate_passages(int k, int u, double p) {
  const int len = k - 1 + u;
  const long double weight_of[3] = {(1.0L - p) / 2.0L, p, (1.0L - p) / 2.0L};
  // compensated accumulation: millions of tiny weights per cell
  std::vector<long double> sum(static_cast<std::size_t>(u) + 1, 0.0L);
  std::vector<long double> carry(static_cast<std::size_t>(u) + 1, 0.0L);
  std::vector<int> trits(static_cast<std::size_t>(len), 0);
  for (;;) {
    long double w = 1.0L;
    for (int i = 0; i < len; ++i) w *= weight_of[trits[i]];
    int count = 0;
    for (int end = k - 1; end < len; ++end) {
      bool all_central = true;
      for (int i = end - k + 1; i <= end; ++i)
        if (trits[i] != 1) { all_central = false; break; }
      count += all_central;
    }
    const long double y = w - carry[count];
    const long double t = sum[count] + y;
    carry[count] = (t - sum[count]) - y;
    sum[count] = t;
    int pos = 0;
    while (pos < len && trits[pos] == 2) trits[pos++] = 0;
    if (pos == len) break;
    ++trits[pos];
  }
  std::vector<double> dist(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i) dist[i] = static_cast<double>(sum[i]);
  return dist;
}

void criterion_chain_exactness() {
  double worst = 0.0;
  for (double p : {0.3, 0.46769}) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<std::vector<double>> by_u;
      for (int u = 1; u <= 12; ++u) by_u.push_back(enumerate_passages(k, u, p));
      for (std::uint32_t b = 1; b <= 3; ++b) {
        OverflowChain chain(p, k, b);
        for (int u = 1; u <= 12; ++u) {
          chain.step();
          const auto& unlumped = by_u[u - 1];
          std::vector<double> expected(b + 1, 0.0);
          for (std::size_t c = 0; c < unlumped.size(); ++c)
            expected[std::min<std::size_t>(c, b)] += unlumped[c];
          const auto got = chain.passage_distribution();
          for (std::size_t c = 0; c <= b; ++c)
            worst = std::max(worst, std::fabs(got.probs[c] - expected[c]));
        }
      }
    }
  }
  report(6, worst < 1e-12,
         format("k<=3, b<=3, u<=12: max |chain - enumeration| = %.2e (< 1e-12)", worst));
}

void criterion_null_behavior() {
  // combine() on independent uniforms is exactly uniform
  const int k = 4;
  const auto scheme = CategoryScheme::make(k);
  SplitMix64 gen(1007);
  const int draws = 10000;
  std::vector<double> finals(draws);
  std::vector<double> ps(pow3(k));
  for (int d = 0; d < draws; ++d) {
    for (auto& p : ps) p = uniform01(gen);
    finals[d] = combine_pvalues(ps, scheme).final_p;
  }
  std::sort(finals.begin(), finals.end());
  double ks = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double fe_hi = static_cast<double>(i + 1) / draws;
    const double fe_lo = static_cast<double>(i) / draws;
    ks = std::max(ks, std::max(std::fabs(fe_hi - finals[i]), std::fabs(finals[i] - fe_lo)));
  }
  const double ks_crit = std::sqrt(std::log(2.0 / 1e-3) / (2.0 * draws));  // 0.0195

  // control generator: five seeds, a gigabyte each, p never below 1e-4
  bool control_ok = true;
  double min_p = 1.0;
  std::uint64_t total_bytes = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TestConfig cfg;
    cfg.w = 64;
    cfg.k = 8;
    cfg.max_bytes = 1000000000;
    cfg.p_threshold = 1e-4;
    cfg.source.kind = SourceSpec::Kind::builtin;
    cfg.source.family = Family::control;
    cfg.source.seed = seed;
    const RunResult r = run_test(cfg, [&](const TestReport& rep) {
      min_p = std::min(min_p, rep.final_p);
    });
    control_ok &= r.verdict == Verdict::pass_so_far;
    total_bytes += r.bytes_processed;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(7, ks < ks_crit && control_ok,
         format("KS = %.4f (< %.4f) on 1e4 combined draws; control min p = %.2e over 5 GB "
                "(%.0f MB/s)",
                ks, ks_crit, min_p, static_cast<double>(total_bytes) / 1e6 / secs));
}

void criterion_xorshift128() {
  TestConfig cfg;
  cfg.w = 64;
  cfg.k = 8;
  cfg.max_bytes = 2000000000;
  cfg.source.kind = SourceSpec::Kind::builtin;
  cfg.source.family = Family::xorshift128;
  cfg.source.seed = 1;
  const RunResult r = run_test(cfg);
  const bool pass = r.verdict == Verdict::fail &&
                    r.last_report.worst_signature == "00000021";
  report(8, pass,
         format("xorshift128 k=8: p = %.3e at %" PRIu64 " bytes, signature %s (want 00000021 "
                "within 2e9 bytes)",
                r.last_report.final_p, r.bytes_processed,
                r.last_report.worst_signature.c_str()));
}

void criterion_xorshift1024() {
  TestConfig cfg;
  cfg.w = 64;
  cfg.k = 16;
  cfg.max_bytes = 1500000000;
  cfg.source.kind = SourceSpec::Kind::builtin;
  cfg.source.family = Family::xorshift1024;
  cfg.source.seed = 1;
  const RunResult r = run_test(cfg);
  const bool pass = r.verdict == Verdict::fail &&
                    r.last_report.worst_signature == "2000000000000001";
  report(9, pass,
         format("xorshift1024 k=16: p = %.3e at %" PRIu64 " bytes, signature %s (want "
                "2000000000000001 within 1.5e9 bytes)",
                r.last_report.final_p, r.bytes_processed,
                r.last_report.worst_signature.c_str()));
}

void criterion_extended() {
  const char* env = std::getenv("HWDEP_EXTENDED");
  if (!env || std::string(env) != "1") {
    skip(10, "hours-scale reproductions; set HWDEP_EXTENDED=1 to run "
             "(xoroshiro128 by 2.5e10 bytes, xorshift128+ transitional by 1.5e10 bytes, "
             "both signature 00000012)");
    return;
  }
  TestConfig cfg;
  cfg.w = 64;
  cfg.k = 8;
  cfg.max_bytes = 25000000000ull;
  cfg.source.kind = SourceSpec::Kind::builtin;
  cfg.source.family = Family::xoroshiro128;
  cfg.source.seed = 1;
  const RunResult a = run_test(cfg);
  const bool a_ok = a.verdict == Verdict::fail && a.last_report.worst_signature == "00000012";

  cfg.max_bytes = 15000000000ull;
  cfg.source.family = Family::xorshift128plus;
  cfg.transitional = true;
  const RunResult b = run_test(cfg);
  const bool b_ok = b.verdict == Verdict::fail && b.last_report.worst_signature == "00000012";
  report(10, a_ok && b_ok,
         format("xoroshiro128: %s at %" PRIu64 " bytes; xorshift128+ transitional: %s at %" PRIu64
                " bytes",
                a.last_report.worst_signature.c_str(), a.bytes_processed,
                b.last_report.worst_signature.c_str(), b.bytes_processed));
}

void criterion_overflow_exit_code(const char* cli_path) {
  if (!cli_path) {
    report(11, false, "no CLI path given (pass it as argv[1])");
    return;
  }
  const std::string dir = std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp";
  const std::string zeros = dir + "/hwdep_zeros.bin";
  std::FILE* f = std::fopen(zeros.c_str(), "wb");
  if (!f) {
    report(11, false, "cannot create " + zeros);
    return;
  }
  std::vector<unsigned char> buf(8 * 20100, 0);
  std::fwrite(buf.data(), 1, buf.size(), f);
  std::fclose(f);

  const std::string cmd = std::string(cli_path) + " --file " + zeros +
                          " --w 64 --k 4 --batch 20000 --unsafe-batch > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  const int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::remove(zeros.c_str());
  report(11, exit_code == 3,
         format("constant source with oversized batch: exit code %d (want 3)", exit_code));
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli_path = argc > 1 ? argv[1] : nullptr;
  const struct {
    int id;
    void (*run)();
  } criteria[] = {
      {1, criterion_transform},     {2, criterion_base_matrix},
      {3, criterion_div3},          {4, criterion_counter_oracle},
      {5, criterion_batch_sizes},   {6, criterion_chain_exactness},
      {7, criterion_null_behavior}, {8, criterion_xorshift128},
      {9, criterion_xorshift1024},  {10, criterion_extended},
  };
  for (const auto& c : criteria) {
    try {
      c.run();
    } catch (const std::exception& e) {
      report(c.id, false, format("unexpected exception: %s", e.what()));
    }
  }
  try {
    criterion_overflow_exit_code(cli_path);
  } catch (const std::exception& e) {
    report(11, false, format("unexpected exception: %s", e.what()));
  }
  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "OK" : "NOT OK", failures);
  return failures == 0 ? 0 : 1;
}
