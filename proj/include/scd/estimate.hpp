#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace scd {

enum class EstimatorKind { fam, ssca };

inline const char* to_string(EstimatorKind k) { return k == EstimatorKind::fam ? "fam" : "ssca"; }

struct BinCoord {
  double f = 0.0;
  double alpha = 0.0;
};

// Describes how the flat value array of an estimate maps onto the (f, alpha)
// plane. Coordinates are derived on demand instead of being stored per bin.
//
// FAM: index = (k*Np + l)*(P/2) + j. j < P/4 holds q = j, the rest hold
//      q = j - P/2. f = (f_k + f_l)/2, alpha = f_k - f_l + q/N.
// SSCA: index = k*N + s with q = s - N/2. alpha = f_k + q/N,
//      f = (f_k - q/N)/2.
// In both cases f_k = (k - Np/2)/Np.
struct ScdLayout {
  EstimatorKind kind = EstimatorKind::fam;
  std::size_t n = 0;       // samples per window
  std::size_t np = 0;      // channeliser size
  std::size_t frames = 0;  // P (FAM only)

  static ScdLayout fam(std::size_t n, std::size_t np, std::size_t frames) {
    return {EstimatorKind::fam, n, np, frames};
  }
  static ScdLayout ssca(std::size_t n, std::size_t np) { return {EstimatorKind::ssca, n, np, 0}; }

  std::size_t bins_per_channel() const { return kind == EstimatorKind::fam ? frames / 2 : n; }

  std::size_t size() const {
    return kind == EstimatorKind::fam ? np * np * (frames / 2) : np * n;
  }

  double channel_freq(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(np / 2)) / static_cast<double>(np);
  }

  // Signed cycle-frequency offset index q of FAM retained slot j.
  std::ptrdiff_t fam_q(std::size_t j) const {
    const auto quarter = static_cast<std::ptrdiff_t>(frames / 4);
    const auto jj = static_cast<std::ptrdiff_t>(j);
    return jj < quarter ? jj : jj - 2 * quarter;
  }

  BinCoord coord(std::size_t index) const {
    const double dalpha = 1.0 / static_cast<double>(n);
    if (kind == EstimatorKind::fam) {
      const std::size_t per_pair = frames / 2;
      const std::size_t pair = index / per_pair;
      const std::size_t j = index % per_pair;
      const double fk = channel_freq(pair / np);
      const double fl = channel_freq(pair % np);
      return {(fk + fl) / 2.0, (fk - fl) + static_cast<double>(fam_q(j)) * dalpha};
    }
    const double fk = channel_freq(index / n);
    const double q = static_cast<double>(index % n) - static_cast<double>(n / 2);
    return {(fk - q * dalpha) / 2.0, fk + q * dalpha};
  }

  bool operator==(const ScdLayout&) const = default;
};

// SCD magnitudes on an estimator-specific bin layout.
template <std::floating_point T>
struct ScdEstimate {
  ScdLayout layout;
  std::vector<T> values;

  std::size_t size() const { return values.size(); }
  BinCoord coord(std::size_t i) const { return layout.coord(i); }
};

// Uniform raster over [f_min, f_max] x [alpha_min, alpha_max]; rows index
// alpha and columns index f, both with endpoints on the first and last cell
// centres.
template <std::floating_point T>
struct Grid {
  std::size_t rows = 0;  // alpha bins
  std::size_t cols = 0;  // f bins
  double alpha_min = -1.0;
  double alpha_max = 1.0;
  double f_min = -0.5;
  double f_max = 0.5;
  std::vector<T> values;

  T& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  bool operator==(const Grid&) const = default;
};

// Index of the nearest of `bins` evenly spaced centres on [lo, hi].
inline std::size_t nearest_bin(double v, double lo, double hi, std::size_t bins) {
  if (bins <= 1) return 0;
  const double t = (v - lo) / (hi - lo) * static_cast<double>(bins - 1);
  const double r = std::round(std::clamp(t, 0.0, static_cast<double>(bins - 1)));
  return static_cast<std::size_t>(r);
}

// Nearest-bin rasterisation; collisions keep the largest value, empty cells are 0.
template <std::floating_point T>
Grid<T> to_grid(const ScdEstimate<T>& est, std::size_t n_f_bins, std::size_t n_alpha_bins) {
  if (n_f_bins == 0 || n_alpha_bins == 0) throw ConfigError("grid dimensions must be positive");
  Grid<T> grid;
  grid.rows = n_alpha_bins;
  grid.cols = n_f_bins;
  grid.values.assign(n_f_bins * n_alpha_bins, T(0));
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    const auto c = est.coord(i);
    const std::size_t r = nearest_bin(c.alpha, grid.alpha_min, grid.alpha_max, grid.rows);
    const std::size_t col = nearest_bin(c.f, grid.f_min, grid.f_max, grid.cols);
    T& cell = grid.at(r, col);
    cell = std::max(cell, est.values[i]);
  }
  return grid;
}

template <std::floating_point T>
Grid<T> fam_to_grid(const ScdEstimate<T>& est, std::size_t n_f_bins, std::size_t n_alpha_bins) {
  return to_grid(est, n_f_bins, n_alpha_bins);
}

template <std::floating_point T>
Grid<T> ssca_to_grid(const ScdEstimate<T>& est, std::size_t n_f_bins, std::size_t n_alpha_bins) {
  return to_grid(est, n_f_bins, n_alpha_bins);
}

}  // namespace scd
