#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace scd {

// ---------------------------------------------------------------------------
// Windows
// ---------------------------------------------------------------------------

enum class WindowKind { chebyshev, rectangular, hamming };

inline const char* to_string(WindowKind k) {
  switch (k) {
    case WindowKind::chebyshev: return "chebyshev";
    case WindowKind::rectangular: return "rectangular";
    case WindowKind::hamming: return "hamming";
  }
  return "unknown";
}

inline constexpr double kDefaultChebyshevAttenuationDb = 100.0;

struct WindowSpec {
  WindowKind kind = WindowKind::chebyshev;
  std::size_t length = 0;
  double atten_db = kDefaultChebyshevAttenuationDb;  // chebyshev only

  static WindowSpec chebyshev(std::size_t length, double atten_db = kDefaultChebyshevAttenuationDb) {
    return {WindowKind::chebyshev, length, atten_db};
  }
  static WindowSpec rectangular(std::size_t length) { return {WindowKind::rectangular, length, 0.0}; }
  static WindowSpec hamming(std::size_t length) { return {WindowKind::hamming, length, 0.0}; }

  bool operator==(const WindowSpec&) const = default;
};

namespace detail {

// Chebyshev polynomial T_order(x) for any real x.
inline long double chebyshev_poly(long double order, long double x) {
  if (x > 1.0L) return std::cosh(order * std::acosh(x));
  if (x < -1.0L) {
    const long double sign = std::fmod(order, 2.0L) == 0.0L ? 1.0L : -1.0L;
    return sign * std::cosh(order * std::acosh(-x));
  }
  return std::cos(order * std::acos(x));
}

// Dolph-Chebyshev window: the inverse DFT of the Chebyshev-polynomial
// frequency response T_{L-1}(beta*cos(pi*k/L)), rearranged to be centred.
// Evaluated in long double with a direct DFT: the response spans the full
// attenuation range, and double rounding shows up in the small outer taps.
inline std::vector<double> dolph_chebyshev(std::size_t length, double atten_db) {
  using ld = long double;
  constexpr ld pi = std::numbers::pi_v<ld>;
  const ld order = static_cast<ld>(length - 1);
  const ld beta = std::cosh(std::acosh(std::pow(10.0L, static_cast<ld>(atten_db) / 20.0L)) / order);
  const ld len = static_cast<ld>(length);

  std::vector<std::complex<ld>> p(length);
  for (std::size_t k = 0; k < length; ++k) {
    const ld x = beta * std::cos(pi * static_cast<ld>(k) / len);
    p[k] = chebyshev_poly(order, x);
    if (length % 2 == 0) {
      // Half-sample delay so the even-length response is real after the DFT.
      const ld ph = pi * static_cast<ld>(k) / len;
      p[k] *= std::complex<ld>(std::cos(ph), std::sin(ph));
    }
  }

  std::vector<ld> cos_table(length), sin_table(length);
  for (std::size_t j = 0; j < length; ++j) {
    const ld ph = -2.0L * pi * static_cast<ld>(j) / len;
    cos_table[j] = std::cos(ph);
    sin_table[j] = std::sin(ph);
  }
  std::vector<double> spectrum(length);
  for (std::size_t i = 0; i < length; ++i) {
    ld acc = 0.0L;
    std::size_t idx = 0;
    for (std::size_t k = 0; k < length; ++k) {
      acc += p[k].real() * cos_table[idx] - p[k].imag() * sin_table[idx];
      idx += i;
      if (idx >= length) idx %= length;
    }
    spectrum[i] = static_cast<double>(acc);
  }

  std::vector<double> w;
  w.reserve(length);
  if (length % 2 == 1) {
    const std::size_t n = (length + 1) / 2;
    for (std::size_t i = n - 1; i >= 1; --i) w.push_back(spectrum[i]);
    for (std::size_t i = 0; i < n; ++i) w.push_back(spectrum[i]);
  } else {
    const std::size_t n = length / 2 + 1;
    for (std::size_t i = n - 1; i >= 1; --i) w.push_back(spectrum[i]);
    for (std::size_t i = 1; i < n; ++i) w.push_back(spectrum[i]);
  }
  return w;
}

}  // namespace detail

inline void validate(const WindowSpec& spec) {
  if (spec.length < 2) throw ConfigError("window length must be at least 2");
  switch (spec.kind) {
    case WindowKind::chebyshev:
      if (!(spec.atten_db > 0.0) || !std::isfinite(spec.atten_db)) {
        throw ConfigError("chebyshev window attenuation must be positive");
      }
      return;
    case WindowKind::rectangular:
    case WindowKind::hamming:
      return;
  }
  throw ConfigError("unsupported window kind");
}

// Symmetric window of spec.length taps, peak normalised to exactly 1.
inline std::vector<double> make_window(const WindowSpec& spec) {
  validate(spec);
  const std::size_t len = spec.length;
  std::vector<double> w(len, 1.0);
  switch (spec.kind) {
    case WindowKind::rectangular:
      return w;
    case WindowKind::hamming:
      for (std::size_t i = 0; i <= (len - 1) / 2; ++i) {
        const double v = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                static_cast<double>(len - 1));
        w[i] = v;
        w[len - 1 - i] = v;
      }
      break;
    case WindowKind::chebyshev:
      w = detail::dolph_chebyshev(len, spec.atten_db);
      break;
  }
  const double peak = *std::max_element(w.begin(), w.end());
  for (auto& v : w) v /= peak;
  return w;
}

template <std::floating_point T>
std::vector<T> make_window_as(const WindowSpec& spec) {
  const auto w = make_window(spec);
  return {w.begin(), w.end()};
}

// ---------------------------------------------------------------------------
// Normalisation
// ---------------------------------------------------------------------------

// Divides by the largest modulus; an all-zero series is returned unchanged.
// A series whose peak modulus already rounds to one is also returned as is,
// so normalize(normalize(x)) == normalize(x) bit for bit.
template <std::floating_point T>
ComplexSeries<T> normalize(std::span<const std::complex<T>> x) {
  if (x.empty()) throw DimensionError("normalize: empty series");
  T peak = 0;
  for (const auto& v : x) peak = std::max(peak, std::abs(v));
  ComplexSeries<T> out(x.begin(), x.end());
  if (peak == T(0)) return out;
  if (std::abs(peak - T(1)) <= 4 * std::numeric_limits<T>::epsilon()) return out;
  for (auto& v : out) v = {v.real() / peak, v.imag() / peak};
  return out;
}

// ---------------------------------------------------------------------------
// DSSS BPSK test signal
// ---------------------------------------------------------------------------

struct DsssBpskConfig {
  std::size_t n_samples = 2048;
  std::size_t processing_gain = 31;  // chips per symbol
  double chip_rate = 0.25;           // fraction of the sample rate
  double snr_db = 10.0;              // +inf disables noise
  std::uint64_t seed = 0;
};

inline void validate(const DsssBpskConfig& cfg) {
  if (cfg.n_samples < 1) throw ConfigError("n_samples must be at least 1");
  if (cfg.processing_gain < 1) throw ConfigError("processing_gain must be at least 1");
  if (!(cfg.chip_rate > 0.0 && cfg.chip_rate <= 0.5)) {
    throw ConfigError("chip_rate must lie in (0, 0.5]");
  }
  if (std::isnan(cfg.snr_db)) throw ConfigError("snr_db must not be NaN");
  if (cfg.chip_rate * static_cast<double>(cfg.n_samples) < static_cast<double>(cfg.processing_gain)) {
    throw ConfigError("signal too short to hold one symbol");
  }
}

// Maximal-length sequence from a 5-stage Fibonacci LFSR with feedback
// polynomial x^5 + x^3 + 1 and initial state 00001. Period 31.
inline std::vector<int> pn_sequence(std::size_t length) {
  std::vector<int> out(length);
  std::uint32_t state = 0b00001;
  for (std::size_t i = 0; i < length; ++i) {
    const std::uint32_t bit = state & 1U;
    out[i] = bit ? 1 : -1;
    const std::uint32_t feedback = (state ^ (state >> 3)) & 1U;
    state = (state >> 1) | (feedback << 4);
  }
  return out;
}

namespace detail {

// Uniform double in (0, 1] from the top 53 bits.
inline double uniform_open0(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

// Complex baseband DSSS BPSK: each data bit multiplies one period of the PN
// code, every chip is held for round(1/chip_rate) samples, and circular
// complex white Gaussian noise is scaled so that the realised signal-to-noise
// power ratio equals snr_db exactly.
inline ComplexSeries<double> generate_dsss_bpsk(const DsssBpskConfig& cfg) {
  validate(cfg);
  const auto hold = static_cast<std::size_t>(std::llround(1.0 / cfg.chip_rate));
  const auto pn = pn_sequence(cfg.processing_gain);
  std::mt19937_64 rng(cfg.seed);

  ComplexSeries<double> x(cfg.n_samples);
  int data_bit = 1;
  for (std::size_t n = 0; n < cfg.n_samples; ++n) {
    const std::size_t chip = n / hold;
    const std::size_t chip_in_symbol = chip % cfg.processing_gain;
    if (n % hold == 0 && chip_in_symbol == 0) data_bit = (rng() >> 63) ? 1 : -1;
    x[n] = static_cast<double>(data_bit * pn[chip_in_symbol]);
  }

  if (std::isinf(cfg.snr_db) && cfg.snr_db > 0) return x;

  ComplexSeries<double> noise(cfg.n_samples);
  for (auto& v : noise) {
    const double radius = std::sqrt(-2.0 * std::log(detail::uniform_open0(rng)));
    const double angle = 2.0 * std::numbers::pi * detail::uniform_open0(rng);
    v = {radius * std::cos(angle), radius * std::sin(angle)};
  }
  double signal_power = 0.0;
  double noise_power = 0.0;
  for (std::size_t n = 0; n < cfg.n_samples; ++n) {
    signal_power += norm2(x[n]);
    noise_power += norm2(noise[n]);
  }
  const double target_noise = signal_power / std::pow(10.0, cfg.snr_db / 10.0);
  const double scale = std::sqrt(target_noise / noise_power);
  for (std::size_t n = 0; n < cfg.n_samples; ++n) x[n] += noise[n] * scale;
  return x;
}

}  // namespace scd
