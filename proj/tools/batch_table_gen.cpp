// Regenerates include/hwdep/batch_table.hpp: certified batch sizes for every
// supported (w, k) at the default threshold 1e-100 / 3^k.
//
//   batch_table_gen [--quick] > include/hwdep/batch_table.hpp
//
// --quick restricts the table to w=64 (useful while iterating).

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <future>
#include <vector>

#include "hwdep/batch_size.hpp"

namespace {

struct Job {
  int width;
  int k;
  double threshold;
  std::uint64_t batch = 0;
};

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  std::vector<Job> jobs;
  for (const int w : {16, 32, 64}) {
    if (quick && w != 64) continue;
    for (int k = 1; k <= hwdep::max_window; ++k)
      jobs.push_back({w, k, 1e-100 / static_cast<double>(hwdep::pow3(k))});
  }

  // Two workers: the chain iteration is memory-light but CPU-heavy.
  std::vector<std::future<void>> workers;
  std::atomic<std::size_t> next{0};
  for (int t = 0; t < 2; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        jobs[i].batch = hwdep::compute_batch_size(jobs[i].width, jobs[i].k);
        std::fprintf(stderr, "w=%d k=%2d -> %" PRIu64 "\n", jobs[i].width,
                     jobs[i].k, jobs[i].batch);
      }
    }));
  for (auto& w : workers) w.get();

  std::printf(
      "#pragma once\n"
      "\n"
      "#include <cstdint>\n"
      "#include <stdexcept>\n"
      "\n"
      "namespace hwdep {\n"
      "\n"
      "struct BatchTableEntry {\n"
      "  int width;\n"
      "  int k;\n"
      "  double threshold;\n"
      "  std::uint64_t batch;\n"
      "};\n"
      "\n"
      "// Generated by tools/batch_table_gen; regenerate with\n"
      "//   batch_table_gen > include/hwdep/batch_table.hpp\n"
      "// Each batch keeps the overflow probability of the busiest packed\n"
      "// counter below 1e-100 / 3^k under the null hypothesis.\n"
      "inline constexpr BatchTableEntry batch_table[] = {\n");
  for (const auto& j : jobs)
    std::printf("    {%d, %d, %.17g, %" PRIu64 "ull},\n", j.width, j.k,
                j.threshold, j.batch);
  std::printf(
      "};\n"
      "\n"
      "inline std::uint64_t certified_batch_size(int width, int k) {\n"
      "  for (const auto& e : batch_table)\n"
      "    if (e.width == width && e.k == k) return e.batch;\n"
      "  throw std::invalid_argument(\"no certified batch size for this (w, k)\");\n"
      "}\n"
      "\n"
      "}  // namespace hwdep\n");
  return 0;
}
