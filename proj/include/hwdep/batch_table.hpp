#pragma once

#include <cstdint>
#include <stdexcept>

namespace hwdep {

struct BatchTableEntry {
  int width;
  int k;
  double threshold;
  std::uint64_t batch;
};

// Generated by tools/batch_table_gen; regenerate with
//   batch_table_gen > include/hwdep/batch_table.hpp
// Each batch keeps the overflow probability of the busiest packed
// counter below 1e-100 / 3^k under the null hypothesis.
inline constexpr BatchTableEntry batch_table[] = {
    {16, 1, 3.3333333333333336e-101, 26860ull},
    {16, 2, 1.1111111111111112e-101, 45639ull},
    {16, 3, 3.7037037037037041e-102, 79396ull},
    {16, 4, 1.2345679012345679e-102, 140506ull},
    {16, 5, 4.1152263374485597e-103, 251638ull},
    {16, 6, 1.3717421124828533e-103, 454326ull},
    {16, 7, 4.5724737082761773e-104, 824654ull},
    {16, 8, 1.524157902758726e-104, 1000000ull},
    {16, 9, 5.080526342529086e-105, 2000000ull},
    {16, 10, 1.6935087808430287e-105, 5000000ull},
    {16, 11, 5.6450292694767623e-106, 9000000ull},
    {16, 12, 1.8816764231589207e-106, 16000000ull},
    {16, 13, 6.2722547438630689e-107, 30000000ull},
    {16, 14, 2.0907515812876898e-107, 56000000ull},
    {16, 15, 6.9691719376256318e-108, 103000000ull},
    {16, 16, 2.3230573125418776e-108, 188000000ull},
    {16, 17, 7.7435243751395921e-109, 345000000ull},
    {16, 18, 2.5811747917131971e-109, 632000000ull},
    {16, 19, 8.6039159723773243e-110, 1159000000ull},
    {32, 1, 3.3333333333333336e-101, 16906ull},
    {32, 2, 1.1111111111111112e-101, 37855ull},
    {32, 3, 3.7037037037037041e-102, 88687ull},
    {32, 4, 1.2345679012345679e-102, 213364ull},
    {32, 5, 4.1152263374485597e-103, 520784ull},
    {32, 6, 1.3717421124828533e-103, 1000000ull},
    {32, 7, 4.5724737082761773e-104, 3000000ull},
    {32, 8, 1.524157902758726e-104, 7000000ull},
    {32, 9, 5.080526342529086e-105, 19000000ull},
    {32, 10, 1.6935087808430287e-105, 47000000ull},
    {32, 11, 5.6450292694767623e-106, 118000000ull},
    {32, 12, 1.8816764231589207e-106, 293000000ull},
    {32, 13, 6.2722547438630689e-107, 727000000ull},
    {32, 14, 2.0907515812876898e-107, 1800000000ull},
    {32, 15, 6.9691719376256318e-108, 4459000000ull},
    {32, 16, 2.3230573125418776e-108, 11043000000ull},
    {32, 17, 7.7435243751395921e-109, 27348000000ull},
    {32, 18, 2.5811747917131971e-109, 67728000000ull},
    {32, 19, 8.6039159723773243e-110, 167728000000ull},
    {64, 1, 3.3333333333333336e-101, 14748ull},
    {64, 2, 1.1111111111111112e-101, 28322ull},
    {64, 3, 3.7037037037037041e-102, 56622ull},
    {64, 4, 1.2345679012345679e-102, 116271ull},
    {64, 5, 4.1152263374485597e-103, 242788ull},
    {64, 6, 1.3717421124828533e-103, 512044ull},
    {64, 7, 4.5724737082761773e-104, 1000000ull},
    {64, 8, 1.524157902758726e-104, 2000000ull},
    {64, 9, 5.080526342529086e-105, 4000000ull},
    {64, 10, 1.6935087808430287e-105, 10000000ull},
    {64, 11, 5.6450292694767623e-106, 22000000ull},
    {64, 12, 1.8816764231589207e-106, 47000000ull},
    {64, 13, 6.2722547438630689e-107, 102000000ull},
    {64, 14, 2.0907515812876898e-107, 218000000ull},
    {64, 15, 6.9691719376256318e-108, 466000000ull},
    {64, 16, 2.3230573125418776e-108, 996000000ull},
    {64, 17, 7.7435243751395921e-109, 2128000000ull},
    {64, 18, 2.5811747917131971e-109, 4545000000ull},
    {64, 19, 8.6039159723773243e-110, 9707000000ull},
};

inline std::uint64_t certified_batch_size(int width, int k) {
  for (const auto& e : batch_table)
    if (e.width == width && e.k == k) return e.batch;
  throw std::invalid_argument("no certified batch size for this (w, k)");
}

}  // namespace hwdep
