// Command-line driver for the Hamming-weight dependency test.
//
// Exit codes: 0 completed without a statistical failure, 1 failure detected
// (final p below the threshold), 2 configuration error, 3 counter overflow.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hwdep/hwdep.hpp"

namespace {

std::uint64_t parse_count(const std::string& text, const char* what) {
  try {
    if (text.find_first_of(".eE") != std::string::npos) {
      const double v = std::stod(text);
      if (!(v >= 0) || v > 1.8e19 || v != std::floor(v))
        throw std::invalid_argument("not a whole number");
      return static_cast<std::uint64_t>(v);
    }
    return std::stoull(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(what) + ": cannot parse '" + text + "'");
  }
}

hwdep::CheckpointSchedule parse_checkpoints(const std::string& text) {
  hwdep::CheckpointSchedule s;
  if (text.empty() || text[0] == 'x') {
    s.factor = text.empty() ? 2.0 : std::stod(text.substr(1));
    if (!(s.factor > 1.0))
      throw CLI::ValidationError("checkpoint factor must exceed 1");
    return s;
  }
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    s.at_bytes.push_back(parse_count(text.substr(start, end - start), "checkpoint"));
    start = end + 1;
  }
  std::sort(s.at_bytes.begin(), s.at_bytes.end());
  return s;
}

void print_batch_table() {
  std::printf("# w  k  threshold      batch\n");
  for (const auto& e : hwdep::batch_table)
    std::printf("%d %d %.3e %" PRIu64 "\n", e.width, e.k, e.threshold, e.batch);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming test for Hamming-weight dependencies in PRNG output"};

  std::string gen_name, file_path, split_name = "whole", checkpoints_text = "x2";
  std::string max_bytes_text, batch_text;
  bool use_stdin = false, transitional = false, unsafe_batch = false,
       batch_table_only = false;
  std::uint64_t seed = 1;
  int w = 64, k = 8, half_band = -1, categories = -1;
  double p_threshold = 1e-20;

  auto* gen_opt = app.add_option("--gen", gen_name,
                                 "Built-in generator: xorshift128[+], xorshift1024[+], "
                                 "xoroshiro128[+], xoroshiro1024[+], control");
  auto* stdin_opt = app.add_flag("--stdin", use_stdin, "Read raw little-endian words from stdin");
  auto* file_opt = app.add_option("--file", file_path, "Read raw little-endian words from a file");
  gen_opt->excludes(stdin_opt)->excludes(file_opt);
  stdin_opt->excludes(file_opt);

  app.add_option("--seed", seed, "Seed for built-in generators (default 1)");
  app.add_option("--w", w, "Word width in bits: 16, 32 or 64 (default 64)");
  app.add_option("--k", k, "Window length in words, 1..19 (default 8)");
  app.add_option("--ell", half_band, "Half-width of the central weight band (default: chosen from w)");
  app.add_option("--C", categories, "Number of p-value categories (default: k/2 + 1)");
  app.add_option("--batch", batch_text, "Batch size override in words (requires --unsafe-batch)");
  app.add_flag("--unsafe-batch", unsafe_batch, "Acknowledge a non-certified batch size");
  app.add_option("--max-bytes", max_bytes_text, "Stop after this many bytes (default: unlimited)");
  app.add_option("--p-threshold", p_threshold, "Failure threshold for the final p-value (default 1e-20)");
  app.add_flag("--transitional", transitional, "Test bit transitions: XOR the stream with itself shifted by one bit");
  app.add_option("--split", split_name, "64-bit outputs to w-bit words: whole|low|high|halves|interleave");
  app.add_option("--checkpoints", checkpoints_text, "'xN' geometric factor or comma-separated byte counts (default x2)");
  app.add_flag("--batch-table", batch_table_only, "Print the certified batch-size table and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (batch_table_only) {
    print_batch_table();
    return 0;
  }

  hwdep::TestConfig cfg;
  try {
    cfg.w = w;
    cfg.k = k;
    cfg.half_band = half_band;
    cfg.categories = categories;
    cfg.unsafe_batch = unsafe_batch;
    cfg.p_threshold = p_threshold;
    cfg.transitional = transitional;
    cfg.split = hwdep::parse_split_mode(split_name);
    cfg.checkpoints = parse_checkpoints(checkpoints_text);
    if (!batch_text.empty()) cfg.batch_size = parse_count(batch_text, "--batch");
    if (!max_bytes_text.empty()) cfg.max_bytes = parse_count(max_bytes_text, "--max-bytes");

    if (use_stdin) {
      cfg.source.kind = hwdep::SourceSpec::Kind::stdin_stream;
    } else if (!file_path.empty()) {
      cfg.source.kind = hwdep::SourceSpec::Kind::file;
      cfg.source.path = file_path;
    } else if (!gen_name.empty()) {
      cfg.source.kind = hwdep::SourceSpec::Kind::builtin;
      cfg.source.family = hwdep::parse_family(gen_name);
      cfg.source.seed = seed;
    } else {
      throw std::invalid_argument("pick a source: --gen, --file or --stdin");
    }
    hwdep::validate_config(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  }

  if (cfg.source.kind == hwdep::SourceSpec::Kind::builtin) {
    const int bits = hwdep::state_bits(cfg.source.family);
    if (static_cast<long long>(cfg.k) * cfg.w < bits)
      std::fprintf(stderr,
                   "hint: k*w = %d bits is below the %d bits of %s state; "
                   "a larger k covers the state better\n",
                   cfg.k * cfg.w, bits, hwdep::family_name(cfg.source.family));
  }

  try {
    const hwdep::RunResult result = hwdep::run_test(cfg, [](const hwdep::TestReport& r) {
      std::printf("%s\n", hwdep::render_report(r).c_str());
      std::fflush(stdout);
    });
    switch (result.verdict) {
      case hwdep::Verdict::fail:
        std::printf("FAIL: final p = %.3e below threshold %.3e after %" PRIu64 " bytes\n",
                    result.last_report.final_p, cfg.p_threshold, result.bytes_processed);
        return 1;
      case hwdep::Verdict::overflow:
        std::printf("OVERFLOW: batch checksum mismatch; p <= 1e-100 if the source is random "
                    "(non-certified batch sizes overflow on non-random input)\n");
        return 3;
      case hwdep::Verdict::pass_so_far:
        std::printf("PASS-SO-FAR: final p = %.3e after %" PRIu64 " bytes\n",
                    result.last_report.final_p, result.bytes_processed);
        return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
