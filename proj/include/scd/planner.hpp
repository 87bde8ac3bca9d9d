#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

// Tile-count arithmetic for mapping the two estimators onto a Versal-class
// AI Engine array. A calculator only: no timing or throughput claims.
namespace scd::planner {

struct DeviceModel {
  std::size_t tile_mem_bytes = 32768;
  std::size_t input_buffer_bytes = 16384;
  std::size_t buffer_complex_floats = 2048;  // F
  std::size_t max_plio_streams = 234;
  std::size_t total_tiles_available = 400;
};

struct PlanReport {
  std::string estimator;
  std::vector<std::pair<std::string, std::size_t>> stage_tiles;  // in pipeline order
  std::size_t total_tiles = 0;
  std::size_t buffer_bytes_per_kernel = 0;
  std::size_t plio_streams = 0;
  bool ddr_required = false;
  std::vector<std::string> violations;

  std::size_t stage(const std::string& name) const {
    for (const auto& [n, t] : stage_tiles) {
      if (n == name) return t;
    }
    return 0;
  }
};

namespace detail {

constexpr std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// ceil(log2(v) / 2) for a power of two v.
constexpr std::size_t half_log2_ceil(std::size_t v) { return (log2_exact(v) + 1) / 2; }

}  // namespace detail

// Empty iff every resource is within the device limits.
inline std::vector<std::string> check_constraints(const PlanReport& report, const DeviceModel& dev) {
  std::vector<std::string> out;
  if (report.total_tiles > dev.total_tiles_available) {
    out.push_back("total_tiles " + std::to_string(report.total_tiles) + " exceeds " +
                  std::to_string(dev.total_tiles_available) + " available tiles");
  }
  if (report.plio_streams > dev.max_plio_streams) {
    out.push_back("plio_streams " + std::to_string(report.plio_streams) + " exceeds " +
                  std::to_string(dev.max_plio_streams) + " stream interfaces");
  }
  if (report.buffer_bytes_per_kernel > dev.input_buffer_bytes) {
    out.push_back("buffer_bytes_per_kernel " + std::to_string(report.buffer_bytes_per_kernel) +
                  " exceeds the " + std::to_string(dev.input_buffer_bytes) + "-byte input buffer");
  }
  return out;
}

// Framing: one norm kernel plus ceil(4N/2F) channel kernels. Demodulate:
// ceil(4N/2F) conv kernels plus ceil(4N/F) stage-1 kernels. FFT2: min(Np, 128).
inline PlanReport plan_fam(std::size_t n, std::size_t np, const DeviceModel& dev = {}) {
  if (!is_pow2(np) || np < 16 || np > 256) {
    throw ConfigError("plan_fam: Np must be a power of two in [16, 256]");
  }
  if (!is_pow2(n) || n < 128 || n > 4096) {
    throw ConfigError("plan_fam: N must be a power of two in [128, 4096]");
  }
  const std::size_t f = dev.buffer_complex_floats;
  const std::size_t intermediate = 4 * n;  // Np * P complex values
  const std::size_t half_buffers = detail::ceil_div(intermediate, 2 * f);
  const std::size_t buffers = detail::ceil_div(intermediate, f);

  PlanReport r;
  r.estimator = "fam";
  r.stage_tiles = {{"framing", 1 + half_buffers},
                   {"demodulate", half_buffers + buffers},
                   {"fft2", std::min<std::size_t>(np, 128)}};
  for (const auto& [name, tiles] : r.stage_tiles) r.total_tiles += tiles;

  const std::size_t closed_form = 1 + half_buffers + (half_buffers + buffers) + std::min<std::size_t>(np, 128);
  if (closed_form != r.total_tiles) throw Error("plan_fam: stage split disagrees with the closed form");

  r.buffer_bytes_per_kernel = (intermediate / buffers) * 8;
  r.plio_streams = std::min<std::size_t>(np, 128);
  r.ddr_required = false;
  r.violations = check_constraints(r, dev);
  return r;
}

// CDP: one down-conversion/conjugate tile plus ceil(log2(Np)/2) FFT tiles.
// 2D FFT: ceil(log2(M1)/2) + 1 rotation tile + ceil(log2(M2)/2).
// `replicas` copies of the whole pipeline scale every stage.
inline PlanReport plan_ssca(std::size_t n, std::size_t np, std::size_t m1, const DeviceModel& dev = {},
                            std::size_t replicas = 1) {
  if (!is_pow2(np) || np < 32 || np > 256) {
    throw ConfigError("plan_ssca: Np must be a power of two in [32, 256]");
  }
  if (!is_pow2(n) || n < (std::size_t{1} << 12) || n > (std::size_t{1} << 20)) {
    throw ConfigError("plan_ssca: N must be a power of two in [2^12, 2^20]");
  }
  if (!is_pow2(m1) || m1 > n || n / m1 > 1024 || m1 > 1024) {
    throw ConfigError("plan_ssca: M1 and M2 = N/M1 must be powers of two no larger than 1024");
  }
  if (replicas < 1) throw ConfigError("plan_ssca: replicas must be at least 1");
  const std::size_t m2 = n / m1;

  PlanReport r;
  r.estimator = "ssca";
  r.stage_tiles = {{"cdp", replicas * (1 + detail::half_log2_ceil(np))},
                   {"ffts1", replicas * (detail::half_log2_ceil(m1) + 1)},
                   {"ffts2", replicas * detail::half_log2_ceil(m2)}};
  for (const auto& [name, tiles] : r.stage_tiles) r.total_tiles += tiles;
  // Each tile works on 1K-point single-precision complex arrays.
  r.buffer_bytes_per_kernel = std::max({np, m1, m2}) * 8;
  // Even/odd input and output streams per stage plus the rotation-factor stream.
  r.plio_streams = replicas * (3 * 2 + 3 * 2 + 1);
  r.ddr_required = n * np > (std::size_t{1} << 20);
  r.violations = check_constraints(r, dev);
  return r;
}

// Human-readable report.
inline std::string format_text(const PlanReport& r) {
  std::ostringstream os;
  os << r.estimator << " plan\n";
  for (const auto& [name, tiles] : r.stage_tiles) os << "  " << name << ": " << tiles << " tiles\n";
  os << "  total: " << r.total_tiles << " tiles\n";
  os << "  buffer per kernel: " << r.buffer_bytes_per_kernel << " bytes\n";
  os << "  PLIO streams: " << r.plio_streams << "\n";
  os << "  off-chip memory: " << (r.ddr_required ? "required" : "not required") << "\n";
  if (r.violations.empty()) {
    os << "  constraints: ok\n";
  } else {
    for (const auto& v : r.violations) os << "  violation: " << v << "\n";
  }
  return os.str();
}

// One key=value pair per line.
inline std::string format_kv(const PlanReport& r) {
  std::ostringstream os;
  os << "estimator=" << r.estimator << "\n";
  for (const auto& [name, tiles] : r.stage_tiles) os << "stage." << name << "=" << tiles << "\n";
  os << "total_tiles=" << r.total_tiles << "\n";
  os << "buffer_bytes_per_kernel=" << r.buffer_bytes_per_kernel << "\n";
  os << "plio_streams=" << r.plio_streams << "\n";
  os << "ddr_required=" << (r.ddr_required ? 1 : 0) << "\n";
  os << "violations=" << r.violations.size() << "\n";
  for (std::size_t i = 0; i < r.violations.size(); ++i) os << "violation." << i << "=" << r.violations[i] << "\n";
  return os.str();
}

}  // namespace scd::planner
