#pragma once

#include <complex>
#include <cstddef>
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

// FFT accumulation method parameters. The decimation stride L = Np/4 and the
// frame count P = N/L = 4N/Np are derived.
struct FamConfig {
  std::size_t n = 2048;
  std::size_t np = 256;
  WindowSpec a_window = WindowSpec::chebyshev(256);
  WindowSpec g_window = WindowSpec::rectangular(32);
  bool normalize_input = true;
  unsigned threads = 1;

  std::size_t stride() const { return np / 4; }
  std::size_t frames() const { return np == 0 ? 0 : 4 * n / np; }

  // Chebyshev channeliser window and rectangular frame window sized for (n, np).
  static FamConfig make(std::size_t n, std::size_t np) {
    FamConfig cfg;
    cfg.n = n;
    cfg.np = np;
    cfg.a_window = WindowSpec::chebyshev(np);
    cfg.g_window = WindowSpec::rectangular(np == 0 ? 0 : 4 * n / np);
    return cfg;
  }
};

// Structural checks shared by the individual stages: power-of-two sizes with
// L >= 1 and P >= 4, and window lengths that match. No envelope limits.
inline void validate_shape(const FamConfig& cfg) {
  if (!is_pow2(cfg.np) || cfg.np < 4) {
    throw ConfigError("FAM: Np must be a power of two >= 4, got " + std::to_string(cfg.np));
  }
  if (!is_pow2(cfg.n)) throw ConfigError("FAM: N must be a power of two, got " + std::to_string(cfg.n));
  if (cfg.frames() < 4 || 4 * cfg.n % cfg.np != 0) {
    throw ConfigError("FAM: P = 4N/Np must be an integer of at least 4 to retain a central band");
  }
  if (cfg.frames() > kMaxFftSize) throw ConfigError("FAM: P exceeds the largest FFT size");
  if (cfg.a_window.length != cfg.np) throw ConfigError("FAM: a_window length must equal Np");
  if (cfg.g_window.length != cfg.frames()) throw ConfigError("FAM: g_window length must equal P");
  validate(cfg.a_window);
  validate(cfg.g_window);
}

// Supported envelope: Np in [2^4, 2^8], N in [2^7, 2^12].
inline void validate(const FamConfig& cfg) {
  if (!is_pow2(cfg.np) || cfg.np < 16 || cfg.np > 256) {
    throw ConfigError("FAM: Np must be a power of two in [16, 256], got " + std::to_string(cfg.np));
  }
  if (!is_pow2(cfg.n) || cfg.n < 128 || cfg.n > 4096) {
    throw ConfigError("FAM: N must be a power of two in [128, 4096], got " + std::to_string(cfg.n));
  }
  validate_shape(cfg);
}

// Np x P matrix of overlapping frames: out(n, p) = x[p*L + n], zero past N-1.
template <std::floating_point T>
ComplexMatrix<T> frame(std::span<const std::complex<T>> x, const FamConfig& cfg) {
  validate_shape(cfg);
  if (x.size() != cfg.n) {
    throw DimensionError("frame: expected " + std::to_string(cfg.n) + " samples, got " +
                         std::to_string(x.size()));
  }
  const std::size_t frames = cfg.frames();
  const std::size_t stride = cfg.stride();
  ComplexMatrix<T> out(cfg.np, frames);
  for (std::size_t p = 0; p < frames; ++p) {
    for (std::size_t i = 0; i < cfg.np; ++i) {
      const std::size_t src = p * stride + i;
      out(i, p) = src < x.size() ? x[src] : std::complex<T>{};
    }
  }
  return out;
}

// Windowed Np-point FFT of every frame, shifted so row m is f_m = (m - Np/2)/Np,
// then the down-conversion phase exp(-i*2*pi*(m - Np/2)*p*L/Np).
template <std::floating_point T>
ComplexMatrix<T> demodulate(const ComplexMatrix<T>& frames, const FamConfig& cfg) {
  validate_shape(cfg);
  const std::size_t np = cfg.np;
  const std::size_t count = cfg.frames();
  if (frames.rows() != np || frames.cols() != count) {
    throw DimensionError("demodulate: expected a " + std::to_string(np) + "x" + std::to_string(count) +
                         " matrix");
  }
  const auto window = make_window_as<T>(cfg.a_window);
  const FftPlan<T> plan(np);
  const auto roots = unit_roots<T>(np);
  const std::size_t stride = cfg.stride();

  ComplexMatrix<T> out(np, count);
  parallel_for(count, cfg.threads, [&](std::size_t begin, std::size_t end) {
    ComplexSeries<T> buf(np);
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t i = 0; i < np; ++i) buf[i] = frames(i, p) * window[i];
      plan.execute(buf);
      for (std::size_t m = 0; m < np; ++m) {
        // Row m holds unshifted bin (m + Np/2) mod Np; its signed index is m - Np/2.
        const auto bin = buf[(m + np / 2) % np];
        const std::size_t signed_mod = (m + np / 2) % np;  // (m - Np/2) mod Np
        out(m, p) = cmul(bin, roots[(signed_mod * ((p * stride) % np)) % np]);
      }
    }
  });
  return out;
}

namespace detail {

// Conjugate product of channels k and l, frame window, P-point FFT, and the
// central half of the spectrum in the retained order. `work` has length P and
// `out` length P/2.
template <std::floating_point T>
void fam_pair_into(const ComplexMatrix<T>& xt, std::size_t k, std::size_t l, std::span<const T> g,
                   const FftPlan<T>& plan, std::span<std::complex<T>> work,
                   std::span<std::complex<T>> out) {
  const std::size_t frames = xt.cols();
  const auto row_k = xt.row(k);
  const auto row_l = xt.row(l);
  for (std::size_t r = 0; r < frames; ++r) work[r] = cmul_conj(row_k[r], row_l[r]) * g[r];
  plan.execute(work);
  const std::size_t quarter = frames / 4;
  // Shifted bins [P/2, 3P/4) are unshifted [0, P/4); shifted [P/4, P/2) are [3P/4, P).
  for (std::size_t j = 0; j < quarter; ++j) out[j] = work[j];
  for (std::size_t j = 0; j < quarter; ++j) out[quarter + j] = work[3 * quarter + j];
}

}  // namespace detail

// Complex (pre-magnitude) retained spectrum of one channel pair.
template <std::floating_point T>
ComplexSeries<T> fam_pair_spectrum(const ComplexMatrix<T>& xt, std::size_t k, std::size_t l,
                                   const FamConfig& cfg) {
  validate_shape(cfg);
  if (xt.rows() != cfg.np || xt.cols() != cfg.frames()) {
    throw DimensionError("fam_pair_spectrum: demodulate matrix has the wrong shape");
  }
  if (k >= cfg.np || l >= cfg.np) throw DimensionError("fam_pair_spectrum: channel out of range");
  const auto g = make_window_as<T>(cfg.g_window);
  const FftPlan<T> plan(cfg.frames());
  ComplexSeries<T> work(cfg.frames());
  ComplexSeries<T> out(cfg.frames() / 2);
  detail::fam_pair_into<T>(xt, k, l, g, plan, work, out);
  return out;
}

// |.|^2 of the retained P-point spectrum for every (k, l) channel pair.
template <std::floating_point T>
ScdEstimate<T> fam_scd(const ComplexMatrix<T>& xt, const FamConfig& cfg) {
  validate_shape(cfg);
  const std::size_t np = cfg.np;
  const std::size_t frames = cfg.frames();
  if (xt.rows() != np || xt.cols() != frames) {
    throw DimensionError("fam_scd: expected a " + std::to_string(np) + "x" + std::to_string(frames) +
                         " matrix");
  }
  const auto g = make_window_as<T>(cfg.g_window);
  const FftPlan<T> plan(frames);
  const std::size_t per_pair = frames / 2;

  ScdEstimate<T> est;
  est.layout = ScdLayout::fam(cfg.n, np, frames);
  est.values.resize(est.layout.size());
  parallel_for(np, cfg.threads, [&](std::size_t begin, std::size_t end) {
    ComplexSeries<T> work(frames);
    ComplexSeries<T> kept(per_pair);
    for (std::size_t k = begin; k < end; ++k) {
      for (std::size_t l = 0; l < np; ++l) {
        detail::fam_pair_into<T>(xt, k, l, g, plan, work, kept);
        T* dst = est.values.data() + (k * np + l) * per_pair;
        for (std::size_t j = 0; j < per_pair; ++j) dst[j] = norm2(kept[j]);
      }
    }
  });
  return est;
}

// normalize -> frame -> demodulate -> fam_scd.
template <std::floating_point T>
ScdEstimate<T> fam_full(std::span<const std::complex<T>> x, const FamConfig& cfg) {
  validate(cfg);
  if (x.size() != cfg.n) {
    throw DimensionError("fam_full: expected " + std::to_string(cfg.n) + " samples, got " +
                         std::to_string(x.size()));
  }
  const ComplexSeries<T> input =
      cfg.normalize_input ? normalize(x) : ComplexSeries<T>(x.begin(), x.end());
  const auto frames = frame<T>(input, cfg);
  const auto xt = demodulate(frames, cfg);
  return fam_scd(xt, cfg);
}

}  // namespace scd
