#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "estimate.hpp"
#include "fam.hpp"
#include "signal.hpp"
#include "ssca.hpp"
#include "types.hpp"

// Independent double-precision references. Nothing here calls FftPlan; every
// transform is a direct sum.
namespace scd::oracle {

inline constexpr std::size_t kMaxNaiveDft = 8192;

inline ComplexSeries<double> dft_naive(std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  if (n > kMaxNaiveDft) {
    throw CapacityError("dft_naive: length " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxNaiveDft));
  }
  const auto roots = unit_roots<double>(n);
  ComplexSeries<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{};
    for (std::size_t t = 0; t < n; ++t) acc += x[t] * roots[(t * k) % n];
    out[k] = acc;
  }
  return out;
}

// Demodulate matrix by direct evaluation of
//   X_T(pL, f_m) = sum_j a[j] x[pL + j] exp(-i*2*pi*f_m*j) * exp(-i*2*pi*f_m*pL)
// with f_m = (m - Np/2)/Np and x zero beyond the record.
inline ComplexMatrix<double> demodulate_reference(std::span<const std::complex<double>> x,
                                                  const FamConfig& cfg) {
  validate_shape(cfg);
  if (x.size() != cfg.n) throw DimensionError("demodulate_reference: length mismatch");
  const auto a = make_window(cfg.a_window);
  const std::size_t np = cfg.np;
  const std::size_t stride = cfg.stride();
  ComplexMatrix<double> out(np, cfg.frames());
  for (std::size_t p = 0; p < cfg.frames(); ++p) {
    for (std::size_t m = 0; m < np; ++m) {
      const double f = (static_cast<double>(m) - static_cast<double>(np / 2)) / static_cast<double>(np);
      std::complex<double> acc{};
      for (std::size_t j = 0; j < np; ++j) {
        const std::size_t src = p * stride + j;
        if (src >= x.size()) break;
        const double ph = -2.0 * std::numbers::pi * f * static_cast<double>(j);
        acc += a[j] * x[src] * std::complex<double>(std::cos(ph), std::sin(ph));
      }
      const double ph = -2.0 * std::numbers::pi * f * static_cast<double>(p * stride);
      out(m, p) = acc * std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  return out;
}

namespace detail {

// Complex demodulate centred on sample t:
//   X_T(t, f) = sum_{r=-Np/2}^{Np/2-1} a[r + Np/2] x[t + r] exp(-i*2*pi*f*(t + r)).
inline std::complex<double> complex_demodulate(std::span<const std::complex<double>> x,
                                               std::span<const double> a, std::ptrdiff_t t,
                                               double f) {
  const auto np = static_cast<std::ptrdiff_t>(a.size());
  std::complex<double> acc{};
  for (std::ptrdiff_t r = -np / 2; r < np / 2; ++r) {
    const std::ptrdiff_t src = t + r;
    if (src < 0 || src >= static_cast<std::ptrdiff_t>(x.size())) continue;
    const double ph = -2.0 * std::numbers::pi * f * static_cast<double>(src);
    acc += a[static_cast<std::size_t>(r + np / 2)] * x[static_cast<std::size_t>(src)] *
           std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return acc;
}

}  // namespace detail

// Rows [first, first + count) of the channeliser data product by direct
// evaluation: X_g(n, k) = X_T(n, f_k) * conj(x[n]) * g[n].
inline ComplexMatrix<double> cdp_reference(std::span<const std::complex<double>> x, const SscaConfig& cfg,
                                           std::size_t first, std::size_t count) {
  validate(cfg);
  if (x.size() != cfg.n) throw DimensionError("cdp_reference: length mismatch");
  if (first + count > cfg.n) throw DimensionError("cdp_reference: row range out of bounds");
  const auto a = make_window(cfg.a_window);
  const auto g = make_window(cfg.g_window);
  ComplexMatrix<double> out(count, cfg.np);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t t = first + i;
    for (std::size_t k = 0; k < cfg.np; ++k) {
      const double f = (static_cast<double>(k) - static_cast<double>(cfg.np / 2)) / static_cast<double>(cfg.np);
      out(i, k) = detail::complex_demodulate(x, a, static_cast<std::ptrdiff_t>(t), f) * std::conj(x[t]) * g[t];
    }
  }
  return out;
}

// Time-smoothed cross-product of complex demodulates at f0 +/- alpha0/2,
// evaluated at every sample and weighted by g. The channeliser window `a`
// sets Np; `g` must span the whole record.
inline std::complex<double> scd_timesmoothed(std::span<const std::complex<double>> x, double f0,
                                             double alpha0, const WindowSpec& a_spec,
                                             const WindowSpec& g_spec) {
  const double f1 = f0 + alpha0 / 2.0;
  const double f2 = f0 - alpha0 / 2.0;
  if (f1 < -0.5 || f1 > 0.5 || f2 < -0.5 || f2 > 0.5) {
    throw DomainError("scd_timesmoothed: f0 +/- alpha0/2 must lie in [-0.5, 0.5]");
  }
  if (g_spec.length != x.size()) throw DimensionError("scd_timesmoothed: g must span the record");
  const auto a = make_window(a_spec);
  const auto g = make_window(g_spec);
  std::complex<double> acc{};
  for (std::size_t t = 0; t < x.size(); ++t) {
    const auto t_signed = static_cast<std::ptrdiff_t>(t);
    const auto d1 = detail::complex_demodulate(x, a, t_signed, f1);
    const auto d2 = detail::complex_demodulate(x, a, t_signed, f2);
    acc += d1 * std::conj(d2) * g[t];
  }
  return acc;
}

struct ErrorStats {
  double mean_rel = 0.0;
  double max_rel = 0.0;
  double mean_abs = 0.0;
  std::size_t n_bins = 0;
};

// Per-bin e_i = |t_i - r_i| / max(|r_i|, tau), tau = 1e-6 * max|r|.
template <class A, class B>
ErrorStats relative_error(std::span<const A> test, std::span<const B> reference) {
  if (test.size() != reference.size()) {
    throw DimensionError("relative_error: " + std::to_string(test.size()) + " vs " +
                         std::to_string(reference.size()) + " bins");
  }
  if (reference.empty()) throw DimensionError("relative_error: no bins");
  double peak = 0.0;
  for (const auto& r : reference) peak = std::max(peak, std::abs(static_cast<double>(r)));
  const double tau = 1e-6 * peak;
  ErrorStats stats;
  stats.n_bins = reference.size();
  double sum_rel = 0.0;
  double sum_abs = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = static_cast<double>(reference[i]);
    const double diff = std::abs(static_cast<double>(test[i]) - r);
    const double denom = std::max(std::abs(r), tau);
    const double e = denom > 0.0 ? diff / denom : (diff == 0.0 ? 0.0 : HUGE_VAL);
    sum_rel += e;
    sum_abs += diff;
    stats.max_rel = std::max(stats.max_rel, e);
  }
  stats.mean_rel = sum_rel / static_cast<double>(stats.n_bins);
  stats.mean_abs = sum_abs / static_cast<double>(stats.n_bins);
  return stats;
}

template <std::floating_point A, std::floating_point B>
ErrorStats relative_error(const ScdEstimate<A>& test, const ScdEstimate<B>& reference) {
  if (!(test.layout == reference.layout)) throw DimensionError("relative_error: bin layouts differ");
  return relative_error(std::span<const A>(test.values), std::span<const B>(reference.values));
}

struct AlphaProfile {
  std::vector<double> alphas;  // strictly increasing, [-1, 1]
  std::vector<double> values;  // max over f at each alpha
};

// n_alpha_bins evenly spaced centres on [-1, 1]; each estimate bin goes to
// the nearest centre and the profile keeps the maximum.
template <std::floating_point T>
AlphaProfile alpha_profile(const ScdEstimate<T>& est, std::size_t n_alpha_bins) {
  if (est.values.empty()) throw DimensionError("alpha_profile: empty estimate");
  if (n_alpha_bins < 2) throw ConfigError("alpha_profile: need at least two bins");
  AlphaProfile p;
  p.alphas.resize(n_alpha_bins);
  p.values.assign(n_alpha_bins, 0.0);
  for (std::size_t i = 0; i < n_alpha_bins; ++i) {
    p.alphas[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n_alpha_bins - 1);
  }
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    const std::size_t b = nearest_bin(est.coord(i).alpha, -1.0, 1.0, n_alpha_bins);
    p.values[b] = std::max(p.values[b], static_cast<double>(est.values[i]));
  }
  return p;
}

// Profile with one bin per multiple of 1/N, so every SSCA bin lands on a centre.
template <std::floating_point T>
AlphaProfile alpha_profile_native(const ScdEstimate<T>& est) {
  return alpha_profile(est, 2 * est.layout.n + 1);
}

// Strict local maxima at or above rel_threshold * max(profile), skipping
// |alpha| <= exclusion. A negative exclusion means four profile bin widths.
inline std::vector<double> detect_cycle_frequencies(const AlphaProfile& p, double rel_threshold,
                                                    double exclusion = -1.0) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw ConfigError("detect_cycle_frequencies: rel_threshold must lie in (0, 1)");
  }
  const std::size_t n = p.values.size();
  std::vector<double> found;
  if (n < 3) return found;
  if (exclusion < 0.0) exclusion = 4.0 * (p.alphas[1] - p.alphas[0]);
  const double peak = *std::max_element(p.values.begin(), p.values.end());
  const double floor = rel_threshold * peak;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (std::abs(p.alphas[i]) <= exclusion + 1e-12) continue;
    const double v = p.values[i];
    if (v > p.values[i - 1] && v > p.values[i + 1] && v >= floor && v > 0.0) found.push_back(p.alphas[i]);
  }
  return found;
}

}  // namespace scd::oracle
