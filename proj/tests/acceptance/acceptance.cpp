// Acceptance driver: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scd.hpp"

namespace {

using namespace scd;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <std::floating_point T>
ComplexSeries<T> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexSeries<T> x(n);
  for (auto& v : x) v = {static_cast<T>(d(rng)), static_cast<T>(d(rng))};
  return x;
}

template <class A, class B>
double normwise(std::span<const std::complex<A>> t, std::span<const std::complex<B>> r) {
  double diff = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    diff = std::max(diff, std::abs(std::complex<double>(t[i]) - std::complex<double>(r[i])));
    peak = std::max(peak, std::abs(std::complex<double>(r[i])));
  }
  return diff / peak;
}

void planner_counts() {
  auto t0 = Clock::now();
  const auto fam = planner::plan_fam(2048, 256);
  const double fam_s = seconds(t0);
  t0 = Clock::now();
  const auto ssca = planner::plan_ssca(std::size_t{1} << 20, 64, 1024);
  const double ssca_s = seconds(t0);
  const bool ok = fam.total_tiles == 137 && ssca.total_tiles == 15 && fam_s < 1e-3 && ssca_s < 1e-3;
  report(1, "planner tile counts", ok,
         "fam(2048,256)=" + std::to_string(fam.total_tiles) + " in " + fmt("%.2g s", fam_s) +
             ", ssca(2^20,64,1024)=" + std::to_string(ssca.total_tiles) + " in " + fmt("%.2g s", ssca_s));
}

void fam_precision() {
  const auto cfg = FamConfig::make(2048, 256);
  const auto x64 = generate_dsss_bpsk({2048, 31, 0.25, 10.0, 11});
  const auto x32 = convert<float, double>(x64);
  const auto t0 = Clock::now();
  const auto a = fam_full<float>(x32, cfg);
  const double elapsed = seconds(t0);
  const auto b = fam_full<double>(x64, cfg);
  const auto s = oracle::relative_error(a, b);
  report(2, "FAM f32 vs f64 (N=2048, Np=256)", s.mean_rel <= 2e-4 && elapsed < 10.0,
         "mean_rel=" + fmt("%.3g", s.mean_rel) + " max_rel=" + fmt("%.3g", s.max_rel) +
             " f32_time=" + fmt("%.3g s", elapsed));
}

void ssca_2d_vs_direct() {
  bool ok = true;
  std::string detail;
  for (const unsigned bits : {12u, 14u, 16u}) {
    for (const std::size_t np : {32u, 64u}) {
      const auto cfg = SscaConfig::make(std::size_t{1} << bits, np);
      const auto x = convert<float, double>(generate_dsss_bpsk({cfg.n, 31, 0.25, 10.0, 5}));
      const auto two = ssca_2dfft<float>(x, cfg);
      const auto one = ssca_direct<float>(x, cfg);
      const auto s = oracle::relative_error(two, one);
      ok = ok && s.max_rel <= 1e-5;
      detail += " 2^" + std::to_string(bits) + "/" + std::to_string(np) + ":max=" + fmt("%.2g", s.max_rel) +
                ",mean=" + fmt("%.2g", s.mean_rel);
    }
  }
  report(3, "SSCA f32 2D vs direct, max_rel <= 1e-5", ok, detail.substr(1));

  // Full scale: 2^20 samples with the stage-1 store spilled to disk.
  auto cfg = SscaConfig::make(std::size_t{1} << 20, 64, 1024);
  const auto x64 = generate_dsss_bpsk({cfg.n, 31, 0.25, 10.0, 9});
  SscaRunInfo info;
  ComplexSeries<float> x32 = convert<float, double>(x64);
  const auto t0 = Clock::now();
  const auto two = ssca_2dfft<float>(x32, cfg, &info);
  const double elapsed = seconds(t0);
  x32 = {};
  cfg.mode = SscaMode::direct_1d;
  const auto ref = ssca_direct<double>(x64, cfg);
  const auto s = oracle::relative_error(two, ref);
  report(3, "SSCA f32 2D (2^20, Np=64, 1024x1024, spilled) vs f64 direct, mean_rel <= 1e-5",
         s.mean_rel <= 1e-5 && info.spilled,
         "mean_rel=" + fmt("%.3g", s.mean_rel) + " max_rel=" + fmt("%.3g", s.max_rel) +
             " spilled_bytes=" + std::to_string(info.spill_bytes) + " time=" + fmt("%.3g s", elapsed));
}

void ssca_cycle_frequencies() {
  const auto cfg = SscaConfig::make(std::size_t{1} << 16, 64);
  const auto x = convert<float, double>(generate_dsss_bpsk({cfg.n, 31, 0.25, 10.0, 3}));
  const auto est = ssca_2dfft<float>(x, cfg);
  const auto peaks = oracle::detect_cycle_frequencies(oracle::alpha_profile_native(est), 0.2);
  const double rate = 0.25 / 31.0;
  std::set<long> multiples;
  bool aligned = true;
  for (const double a : peaks) {
    const long m = std::lround(a / rate);
    aligned = aligned && std::abs(a - static_cast<double>(m) * rate) <= 1.0 / static_cast<double>(cfg.n);
    multiples.insert(m);
  }
  report(4, "SSCA DSSS cycle frequencies", aligned && multiples.size() >= 3 && !peaks.empty(),
         std::to_string(peaks.size()) + " peaks, " + std::to_string(multiples.size()) +
             " distinct multiples of Rc/G, all within 1/N: " + (aligned ? "yes" : "no"));
}

void fft_accuracy() {
  double worst32 = 0.0, worst64 = 0.0;
  for (std::size_t n = 8; n <= 4096; n *= 2) {
    const auto x = gaussian<double>(n, n);
    const auto ref = oracle::dft_naive(x);
    const auto x32 = convert<float, double>(x);
    const auto y32 = fft(FftPlan<float>(n), std::span<const std::complex<float>>(x32));
    const auto y64 = fft(FftPlan<double>(n), std::span<const std::complex<double>>(x));
    worst32 = std::max(worst32, normwise<float, double>(y32, ref));
    worst64 = std::max(worst64, normwise<double, double>(y64, ref));
  }
  report(5, "FFT vs naive DFT, sizes 8..4096", worst32 <= 1e-5 && worst64 <= 1e-10,
         "f32=" + fmt("%.3g", worst32) + " f64=" + fmt("%.3g", worst64));

  double worst_dec = 0.0;
  std::size_t pairs = 0;
  for (std::size_t m1 = 1; m1 <= 1024; m1 *= 2) {
    for (std::size_t m2 = 1; m2 <= 1024 && m1 * m2 <= (std::size_t{1} << 16); m2 *= 2) {
      const std::size_t n = m1 * m2;
      const auto x = gaussian<double>(n, 100 + n + m1);
      const auto y = fft_decomposed<double>(x, m1, m2);
      const auto ref = n <= 1024 ? oracle::dft_naive(x) : fft(FftPlan<double>(n), std::span<const std::complex<double>>(x));
      worst_dec = std::max(worst_dec, normwise<double, double>(y, ref));
      ++pairs;
    }
  }
  report(5, "2D decomposed FFT, all M1*M2 <= 2^16 (f64)", worst_dec <= 1e-6,
         std::to_string(pairs) + " pairs, worst=" + fmt("%.3g", worst_dec));

  double worst_p = 0.0;
  for (std::size_t n = 2; n <= (std::size_t{1} << 20); n *= 4) {
    const auto x = gaussian<float>(n, 7 * n);
    const auto y = fft(FftPlan<float>(n), std::span<const std::complex<float>>(x));
    double ex = 0.0, ey = 0.0;
    for (const auto& v : x) ex += std::norm(std::complex<double>(v));
    for (const auto& v : y) ey += std::norm(std::complex<double>(v));
    worst_p = std::max(worst_p, std::abs(ey / static_cast<double>(n) - ex) / ex);
  }
  report(5, "Parseval, f32 sizes 2..2^20", worst_p <= 1e-5, "worst=" + fmt("%.3g", worst_p));
}

void properties() {
  // FAM raw output scales with |c|^4.
  {
    auto cfg = FamConfig::make(512, 64);
    cfg.normalize_input = false;
    const auto x = gaussian<double>(512, 21);
    auto y = x;
    const std::complex<double> c(1.3, -0.4);
    for (auto& v : y) v *= c;
    const auto a = fam_full<double>(x, cfg);
    const auto b = fam_full<double>(y, cfg);
    auto scaled = a;
    const double c4 = std::pow(std::abs(c), 4);
    for (auto& v : scaled.values) v *= c4;
    const auto s = oracle::relative_error(b, scaled);
    report(6, "FAM scaling |c|^4", s.max_rel <= 1e-9, "max_rel=" + fmt("%.3g", s.max_rel));
  }
  // SSCA raw output scales with |c|^2.
  {
    auto cfg = SscaConfig::make(4096, 32);
    cfg.normalize_input = false;
    const auto x = gaussian<double>(4096, 22);
    auto y = x;
    const std::complex<double> c(-0.7, 2.1);
    for (auto& v : y) v *= c;
    const auto a = ssca_2dfft<double>(x, cfg);
    const auto b = ssca_2dfft<double>(y, cfg);
    auto scaled = a;
    const double c2 = std::norm(c);
    for (auto& v : scaled.values) v *= c2;
    const auto s = oracle::relative_error(b, scaled);
    report(6, "SSCA scaling |c|^2", s.max_rel <= 1e-9, "max_rel=" + fmt("%.3g", s.max_rel));
  }
  // FAM k = l, q = 0 is real and non-negative.
  {
    const auto cfg = FamConfig::make(256, 32);
    const auto x = gaussian<double>(256, 23);
    const auto xt = demodulate(frame(std::span<const std::complex<double>>(x), cfg), cfg);
    double worst = 0.0;
    bool nonneg = true;
    for (std::size_t k = 0; k < cfg.np; ++k) {
      const auto spec = fam_pair_spectrum(xt, k, k, cfg);
      nonneg = nonneg && spec[0].real() >= 0.0;
      worst = std::max(worst, std::abs(spec[0].imag()) / std::max(spec[0].real(), 1e-300));
    }
    report(6, "FAM k=l product real and non-negative", nonneg && worst <= 1e-12,
           "worst |imag|/real=" + fmt("%.3g", worst));
  }
  // Window symmetry.
  {
    bool ok = true;
    for (const std::size_t len : {7u, 16u, 32u, 64u, 256u}) {
      for (const auto& spec : {WindowSpec::chebyshev(len), WindowSpec::hamming(len), WindowSpec::rectangular(len)}) {
        const auto w = make_window(spec);
        for (std::size_t i = 0; i < len; ++i) ok = ok && std::abs(w[i] - w[len - 1 - i]) <= 1e-12;
        ok = ok && *std::max_element(w.begin(), w.end()) == 1.0;
      }
    }
    report(6, "window symmetry and unit peak", ok, "chebyshev/hamming/rectangular, 5 lengths");
  }
  // fft_shift applied twice to an even-length vector is the identity.
  {
    bool ok = true;
    for (std::size_t n = 2; n <= 4096; n *= 2) {
      const auto x = gaussian<double>(n, n + 5);
      ok = ok && fft_shift(fft_shift(x)) == x;
    }
    report(6, "fft_shift involution", ok, "even lengths 2..4096");
  }
  // SCD1 encode/decode round trip.
  {
    Grid<float> g;
    g.rows = 13;
    g.cols = 7;
    g.values.resize(91);
    for (std::size_t i = 0; i < 91; ++i) g.values[i] = static_cast<float>(i) * 0.37f;
    const auto bytes = encode_scd1(g);
    const auto back = decode_scd1(bytes);
    const bool ok = std::holds_alternative<Grid<float>>(back) && std::get<Grid<float>>(back) == g &&
                    encode_scd1(std::get<Grid<float>>(back)) == bytes;
    report(6, "SCD1 round trip", ok, std::to_string(bytes.size()) + " bytes");
  }
  // Thread count does not change output bits.
  {
    const auto x = convert<float, double>(generate_dsss_bpsk({2048, 31, 0.25, 10.0, 4}));
    auto fc = FamConfig::make(2048, 256);
    const auto f1 = fam_full<float>(x, fc);
    fc.threads = 8;
    const auto f8 = fam_full<float>(x, fc);
    const auto xs = convert<float, double>(generate_dsss_bpsk({16384, 31, 0.25, 10.0, 4}));
    auto sc = SscaConfig::make(16384, 64);
    const auto s1 = ssca_2dfft<float>(xs, sc);
    sc.threads = 8;
    const auto s8 = ssca_2dfft<float>(xs, sc);
    const auto h = [](const auto& e) { return content_hash(std::span(e.values)); };
    const bool ok = h(f1) == h(f8) && h(s1) == h(s8);
    char buf[96];
    std::snprintf(buf, sizeof buf, "fam %016llx/%016llx ssca %016llx/%016llx", static_cast<unsigned long long>(h(f1)),
                  static_cast<unsigned long long>(h(f8)), static_cast<unsigned long long>(h(s1)),
                  static_cast<unsigned long long>(h(s8)));
    report(6, "thread hash identity (1 vs 8)", ok, buf);
  }
}

}  // namespace

int main() {
  try {
    planner_counts();
    fam_precision();
    ssca_2d_vs_direct();
    ssca_cycle_frequencies();
    fft_accuracy();
    properties();
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d failing criteria\n", failures);
  return failures == 0 ? 0 : 1;
}
