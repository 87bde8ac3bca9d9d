#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "estimate.hpp"
#include "fft.hpp"
#include "parallel.hpp"
#include "signal.hpp"
#include "types.hpp"

namespace scd {

enum class SscaMode { direct_1d, decomposed_2d };

inline const char* to_string(SscaMode m) { return m == SscaMode::direct_1d ? "direct" : "2d"; }

// Strip spectral correlation analyser parameters.
struct SscaConfig {
  std::size_t n = 4096;
  std::size_t np = 32;
  std::size_t m1 = 64;
  std::size_t m2 = 64;
  WindowSpec a_window = WindowSpec::chebyshev(32);
  WindowSpec g_window = WindowSpec::rectangular(4096);
  SscaMode mode = SscaMode::decomposed_2d;
  bool normalize_input = true;
  unsigned threads = 1;

  // Stage-1 results larger than this many complex values go to a spill file.
  std::size_t stage1_memory_cap = std::size_t{1} << 24;
  // Empty: a unique file in the system temp directory, removed afterwards.
  // Otherwise the file is written at this path and left in place.
  std::filesystem::path spill_path;
  // Stage 2 fetches C consecutive m1' rows (C*Np values) from every block.
  std::size_t block_read_factor = 8;
  // Largest N*Np the direct variant (and cdp) may materialise.
  std::size_t direct_memory_cap = std::size_t{1} << 26;

  // Chebyshev channeliser window, rectangular N-length window. m1 = 0 picks
  // M2 = max(2^ceil(log2(N)/2), Np) and M1 = N/M2.
  static SscaConfig make(std::size_t n, std::size_t np, std::size_t m1 = 0,
                         SscaMode mode = SscaMode::decomposed_2d) {
    SscaConfig cfg;
    cfg.n = n;
    cfg.np = np;
    if (m1 == 0 && is_pow2(n)) {
      const unsigned bits = log2_exact(n);
      std::size_t m2 = std::size_t{1} << ((bits + 1) / 2);
      m2 = std::max(m2, np);
      cfg.m2 = std::min(m2, n);
      cfg.m1 = n / cfg.m2;
    } else {
      cfg.m1 = m1;
      cfg.m2 = m1 == 0 ? 0 : n / m1;
    }
    cfg.a_window = WindowSpec::chebyshev(np);
    cfg.g_window = WindowSpec::rectangular(n);
    cfg.mode = mode;
    return cfg;
  }
};

inline void validate(const SscaConfig& cfg) {
  if (!is_pow2(cfg.np) || cfg.np < 32 || cfg.np > 256) {
    throw ConfigError("SSCA: Np must be a power of two in [32, 256], got " + std::to_string(cfg.np));
  }
  if (!is_pow2(cfg.n) || cfg.n < (std::size_t{1} << 12) || cfg.n > (std::size_t{1} << 20)) {
    throw ConfigError("SSCA: N must be a power of two in [2^12, 2^20], got " + std::to_string(cfg.n));
  }
  if (!is_pow2(cfg.m1) || !is_pow2(cfg.m2) || cfg.m1 * cfg.m2 != cfg.n) {
    throw ConfigError("SSCA: M1 and M2 must be powers of two with M1*M2 = N");
  }
  if (cfg.m1 > 1024 || cfg.m2 > 1024) throw ConfigError("SSCA: M1 and M2 must not exceed 1024");
  if (cfg.m2 % cfg.np != 0) {
    throw ConfigError("SSCA: M2 = " + std::to_string(cfg.m2) + " is not divisible by Np = " +
                      std::to_string(cfg.np));
  }
  if (!is_pow2(cfg.block_read_factor)) throw ConfigError("SSCA: block read factor must be a power of two");
  if (cfg.a_window.length != cfg.np) throw ConfigError("SSCA: a_window length must equal Np");
  if (cfg.g_window.length != cfg.n) throw ConfigError("SSCA: g_window length must equal N");
  validate(cfg.a_window);
  validate(cfg.g_window);
}

// Wall-clock and storage facts about one SSCA run.
struct SscaRunInfo {
  double cdp_seconds = 0.0;     // direct variant only; fused into stage 1 for 2d
  double stage1_seconds = 0.0;
  double stage2_seconds = 0.0;
  bool spilled = false;
  std::uint64_t spill_bytes = 0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Computes CDP rows X_g(n, k) = X_T(n, f_k) * conj(x[n]) * g[n].
//
// X_T(n, f_k) is the a-windowed Np-point FFT of x[n - Np/2 .. n + Np/2 - 1]
// (zero outside the record), shifted so column k is f_k = (k - Np/2)/Np, with
// phase referenced to absolute sample time: exp(-i*2*pi*f_k*(n - Np/2)).
template <std::floating_point T>
class CdpEngine {
 public:
  CdpEngine(std::span<const std::complex<T>> x, const SscaConfig& cfg)
      : np_(cfg.np),
        x_(x.begin(), x.end()),
        padded_(x.size() + cfg.np),
        window_(make_window_as<T>(cfg.a_window)),
        g_(make_window_as<T>(cfg.g_window)),
        plan_(cfg.np),
        roots_(unit_roots<T>(cfg.np)) {
    std::copy(x.begin(), x.end(), padded_.begin() + static_cast<std::ptrdiff_t>(np_ / 2));
  }

  std::size_t channels() const { return np_; }

  // `out` and `work` have length Np.
  void row(std::size_t n, std::span<std::complex<T>> out, std::span<std::complex<T>> work) const {
    for (std::size_t j = 0; j < np_; ++j) work[j] = padded_[n + j] * window_[j];
    plan_.execute(work);
    const std::complex<T> tail = std::conj(x_[n]) * g_[n];
    const std::size_t time_mod = (n + np_ / 2) % np_;  // (n - Np/2) mod Np
    for (std::size_t k = 0; k < np_; ++k) {
      const std::size_t bin = (k + np_ / 2) % np_;  // also (k - Np/2) mod Np
      const auto demod = cmul(work[bin], roots_[(bin * time_mod) % np_]);
      out[k] = cmul(demod, tail);
    }
  }

 private:
  std::size_t np_;
  ComplexSeries<T> x_;
  ComplexSeries<T> padded_;
  std::vector<T> window_;
  std::vector<T> g_;
  FftPlan<T> plan_;
  ComplexSeries<T> roots_;
};

template <std::floating_point T>
ComplexSeries<T> prepare_input(std::span<const std::complex<T>> x, const SscaConfig& cfg) {
  if (x.size() != cfg.n) {
    throw DimensionError("SSCA: expected " + std::to_string(cfg.n) + " samples, got " +
                         std::to_string(x.size()));
  }
  return cfg.normalize_input ? normalize(x) : ComplexSeries<T>(x.begin(), x.end());
}

inline std::filesystem::path unique_spill_path() {
  static std::atomic<std::uint64_t> counter{0};
  std::random_device rd;
  const auto tag = (static_cast<std::uint64_t>(rd()) << 32) ^ counter.fetch_add(1);
  return std::filesystem::temp_directory_path() / ("scd_stage1_" + std::to_string(tag) + ".bin");
}

// Holds the stage-1 output, M2 blocks of M1 x Np values ordered [m2][m1'][k],
// either in memory or in a raw file of interleaved working-precision complex
// values written block by block.
template <std::floating_point T>
class Stage1Store {
 public:
  Stage1Store(const SscaConfig& cfg) : m1_(cfg.m1), m2_(cfg.m2), np_(cfg.np) {
    const std::size_t total = cfg.n * cfg.np;
    if (total <= cfg.stage1_memory_cap) {
      memory_.resize(total);
      return;
    }
    spilled_ = true;
    owns_file_ = cfg.spill_path.empty();
    path_ = owns_file_ ? unique_spill_path() : cfg.spill_path;
    file_.open(path_, std::ios::binary | std::ios::in | std::ios::out | std::ios::trunc);
    if (!file_) throw IoError("cannot create spill file " + path_.string());
  }

  Stage1Store(const Stage1Store&) = delete;
  Stage1Store& operator=(const Stage1Store&) = delete;

  ~Stage1Store() {
    if (file_.is_open()) file_.close();
    if (spilled_ && owns_file_) {
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }

  bool spilled() const { return spilled_; }
  std::uint64_t bytes() const { return spilled_ ? std::uint64_t{m1_} * m2_ * np_ * sizeof(std::complex<T>) : 0; }
  std::size_t block_size() const { return m1_ * np_; }

  // Blocks must arrive in increasing m2 order.
  void write_block(std::size_t m2, std::span<const std::complex<T>> block) {
    if (!spilled_) {
      std::copy(block.begin(), block.end(), memory_.begin() + static_cast<std::ptrdiff_t>(m2 * block_size()));
      return;
    }
    file_.write(reinterpret_cast<const char*>(block.data()),
                static_cast<std::streamsize>(block.size() * sizeof(std::complex<T>)));
    if (!file_) throw IoError("write to spill file " + path_.string() + " failed");
  }

  void finish_writes() {
    if (spilled_) file_.flush();
  }

  // Rows [first, first + count) of every block into out[m2][c][k].
  void read_rows(std::size_t first, std::size_t count, std::span<std::complex<T>> out) {
    const std::size_t chunk = count * np_;
    for (std::size_t b = 0; b < m2_; ++b) {
      const std::size_t offset = b * block_size() + first * np_;
      auto* dst = out.data() + b * chunk;
      if (!spilled_) {
        std::copy_n(memory_.begin() + static_cast<std::ptrdiff_t>(offset), chunk, dst);
        continue;
      }
      file_.seekg(static_cast<std::streamoff>(offset * sizeof(std::complex<T>)));
      file_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(chunk * sizeof(std::complex<T>)));
      if (!file_) throw IoError("read from spill file " + path_.string() + " failed");
    }
  }

 private:
  std::size_t m1_, m2_, np_;
  bool spilled_ = false;
  bool owns_file_ = false;
  std::vector<std::complex<T>> memory_;
  std::filesystem::path path_;
  std::fstream file_;
};

}  // namespace detail

// Full N x Np channeliser data product of x (no normalisation applied).
template <std::floating_point T>
ComplexMatrix<T> cdp(std::span<const std::complex<T>> x, const SscaConfig& cfg) {
  validate(cfg);
  if (x.size() != cfg.n) {
    throw DimensionError("cdp: expected " + std::to_string(cfg.n) + " samples, got " +
                         std::to_string(x.size()));
  }
  if (cfg.n * cfg.np > cfg.direct_memory_cap) throw CapacityError("cdp: N*Np exceeds the in-memory cap");
  const detail::CdpEngine<T> engine(x, cfg);
  ComplexMatrix<T> out(cfg.n, cfg.np);
  parallel_for(cfg.n, cfg.threads, [&](std::size_t begin, std::size_t end) {
    ComplexSeries<T> work(cfg.np);
    for (std::size_t n = begin; n < end; ++n) engine.row(n, out.row(n), work);
  });
  return out;
}

// One N-point FFT per CDP channel; bins fft-shifted so q runs from -N/2.
template <std::floating_point T>
ScdEstimate<T> ssca_direct(std::span<const std::complex<T>> x, const SscaConfig& cfg,
                           SscaRunInfo* info = nullptr) {
  validate(cfg);
  const std::size_t n = cfg.n;
  const std::size_t np = cfg.np;
  if (n * np > cfg.direct_memory_cap) {
    throw CapacityError("ssca_direct: N*Np = " + std::to_string(n * np) + " exceeds the cap of " +
                        std::to_string(cfg.direct_memory_cap) + " values");
  }
  const auto input = detail::prepare_input(x, cfg);

  auto t0 = detail::Clock::now();
  const detail::CdpEngine<T> engine(input, cfg);
  // Channel-major so each column FFT is contiguous.
  ComplexSeries<T> columns(n * np);
  parallel_for(n, cfg.threads, [&](std::size_t begin, std::size_t end) {
    ComplexSeries<T> work(np), row(np);
    for (std::size_t t = begin; t < end; ++t) {
      engine.row(t, row, work);
      for (std::size_t k = 0; k < np; ++k) columns[k * n + t] = row[k];
    }
  });
  const double cdp_seconds = detail::seconds_since(t0);

  t0 = detail::Clock::now();
  ScdEstimate<T> est;
  est.layout = ScdLayout::ssca(n, np);
  est.values.resize(n * np);
  const FftPlan<T> plan(n);
  parallel_for(np, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      std::span<std::complex<T>> col(columns.data() + k * n, n);
      plan.execute(col);
      T* dst = est.values.data() + k * n;
      for (std::size_t s = 0; s < n; ++s) dst[s] = std::abs(col[(s + n / 2) % n]);
    }
  });
  if (info) {
    *info = {};
    info->cdp_seconds = cdp_seconds;
    info->stage2_seconds = detail::seconds_since(t0);
  }
  return est;
}

// Same estimate as ssca_direct with each N-point FFT split into M1-point
// column FFTs, a rotation by exp(-i*2*pi*m2*m1'/N), and M2-point row FFTs.
// CDP rows are produced on demand per m2; the stage-1 result may be spilled
// to disk (see SscaConfig::stage1_memory_cap).
template <std::floating_point T>
ScdEstimate<T> ssca_2dfft(std::span<const std::complex<T>> x, const SscaConfig& cfg,
                          SscaRunInfo* info = nullptr) {
  validate(cfg);
  const std::size_t n = cfg.n;
  const std::size_t np = cfg.np;
  const std::size_t m1 = cfg.m1;
  const std::size_t m2 = cfg.m2;
  const auto input = detail::prepare_input(x, cfg);

  const detail::CdpEngine<T> engine(input, cfg);
  const FftPlan<T> plan1(m1);
  const FftPlan<T> plan2(m2);
  const auto roots = unit_roots<T>(n);
  detail::Stage1Store<T> store(cfg);

  // Stage 1, in batches of m2 so a spill file is written sequentially.
  auto t0 = detail::Clock::now();
  const std::size_t batch = std::min<std::size_t>(m2, std::max<std::size_t>(cfg.threads, 1) * 4);
  std::vector<std::complex<T>> blocks(batch * m1 * np);
  for (std::size_t first = 0; first < m2; first += batch) {
    const std::size_t count = std::min(batch, m2 - first);
    parallel_for(count, cfg.threads, [&](std::size_t begin, std::size_t end) {
      ComplexSeries<T> rows(m1 * np), work(np), column(m1);
      for (std::size_t b = begin; b < end; ++b) {
        const std::size_t c2 = first + b;
        for (std::size_t r = 0; r < m1; ++r) {
          engine.row(r * m2 + c2, std::span(rows).subspan(r * np, np), work);
        }
        std::complex<T>* block = blocks.data() + b * m1 * np;
        for (std::size_t k = 0; k < np; ++k) {
          for (std::size_t r = 0; r < m1; ++r) column[r] = rows[r * np + k];
          plan1.execute(column);
          for (std::size_t r = 0; r < m1; ++r) block[r * np + k] = cmul(column[r], roots[(c2 * r) % n]);
        }
      }
    });
    for (std::size_t b = 0; b < count; ++b) {
      store.write_block(first + b, std::span<const std::complex<T>>(blocks.data() + b * m1 * np, m1 * np));
    }
  }
  store.finish_writes();
  const double stage1_seconds = detail::seconds_since(t0);

  // Stage 2: C rows m1' at a time, one M2-point FFT per (m1', k).
  t0 = detail::Clock::now();
  ScdEstimate<T> est;
  est.layout = ScdLayout::ssca(n, np);
  est.values.resize(n * np);
  const std::size_t c_rows = std::min(cfg.block_read_factor, m1);
  std::vector<std::complex<T>> fetched(m2 * c_rows * np);
  for (std::size_t first = 0; first < m1; first += c_rows) {
    store.read_rows(first, c_rows, fetched);
    parallel_for(c_rows * np, cfg.threads, [&](std::size_t begin, std::size_t end) {
      ComplexSeries<T> row(m2);
      for (std::size_t idx = begin; idx < end; ++idx) {
        const std::size_t c = idx / np;
        const std::size_t k = idx % np;
        for (std::size_t b = 0; b < m2; ++b) row[b] = fetched[(b * c_rows + c) * np + k];
        plan2.execute(row);
        T* dst = est.values.data() + k * n;
        const std::size_t r1 = first + c;
        for (std::size_t b = 0; b < m2; ++b) dst[(m1 * b + r1 + n / 2) % n] = std::abs(row[b]);
      }
    });
  }
  if (info) {
    *info = {};
    info->stage1_seconds = stage1_seconds;
    info->stage2_seconds = detail::seconds_since(t0);
    info->spilled = store.spilled();
    info->spill_bytes = store.bytes();
  }
  return est;
}

// Runs the variant selected by cfg.mode.
template <std::floating_point T>
ScdEstimate<T> ssca(std::span<const std::complex<T>> x, const SscaConfig& cfg,
                    SscaRunInfo* info = nullptr) {
  return cfg.mode == SscaMode::direct_1d ? ssca_direct(x, cfg, info) : ssca_2dfft(x, cfg, info);
}

}  // namespace scd
