// scd: command-line front end for the spectral correlation estimators.
//
// Exit codes: 0 ok, 2 usage/configuration, 3 data, 4 tolerance failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitTolerance = 4;

struct InputOptions {
  std::string path;
  bool csv = false;
};

struct OutputOptions {
  std::string scd1;
  std::string profile_csv;
  std::string pgm;
  bool pgm_log = false;
  std::size_t f_bins = 257;
  std::size_t alpha_bins = 513;
  std::size_t profile_bins = 0;  // 0: one bin per 1/N
};

struct FamOptions {
  InputOptions in;
  OutputOptions out;
  std::size_t n = 2048;
  std::size_t np = 256;
  std::string precision = "f32";
  unsigned threads = 1;
  double atten_db = scd::kDefaultChebyshevAttenuationDb;
  bool no_normalize = false;
};

struct SscaOptions {
  InputOptions in;
  OutputOptions out;
  std::size_t n = std::size_t{1} << 20;
  std::size_t np = 64;
  std::size_t m1 = 0;  // 0: balanced split, M1 = M2 = 1024 at N = 2^20
  std::string mode = "2d";
  std::string precision = "f32";
  unsigned threads = 1;
  double atten_db = scd::kDefaultChebyshevAttenuationDb;
  bool no_normalize = false;
  std::size_t mem_cap = std::size_t{1} << 24;
  std::string spill_path;
  std::size_t block_read = 8;
};

scd::ComplexSeries<double> load_input(const InputOptions& in, std::size_t expected) {
  auto x = in.csv ? scd::read_iq_csv(in.path) : scd::read_iq(in.path);
  if (x.size() != expected) {
    throw scd::DimensionError(in.path + " holds " + std::to_string(x.size()) + " samples, expected " +
                              std::to_string(expected));
  }
  return x;
}

scd::FamConfig fam_config(const FamOptions& o) {
  auto cfg = scd::FamConfig::make(o.n, o.np);
  cfg.a_window = scd::WindowSpec::chebyshev(o.np, o.atten_db);
  cfg.normalize_input = !o.no_normalize;
  cfg.threads = o.threads;
  scd::validate(cfg);
  return cfg;
}

scd::SscaConfig ssca_config(const SscaOptions& o) {
  auto cfg = scd::SscaConfig::make(o.n, o.np, o.m1, o.mode == "direct" ? scd::SscaMode::direct_1d
                                                                       : scd::SscaMode::decomposed_2d);
  cfg.a_window = scd::WindowSpec::chebyshev(o.np, o.atten_db);
  cfg.normalize_input = !o.no_normalize;
  cfg.threads = o.threads;
  cfg.stage1_memory_cap = o.mem_cap;
  cfg.spill_path = o.spill_path;
  cfg.block_read_factor = o.block_read;
  scd::validate(cfg);
  return cfg;
}

template <std::floating_point T>
void write_outputs(const scd::ScdEstimate<T>& est, const OutputOptions& o) {
  const auto grid = scd::to_grid(est, o.f_bins, o.alpha_bins);
  scd::write_scd1(o.scd1, grid);
  if (!o.pgm.empty()) scd::write_pgm(o.pgm, grid, o.pgm_log);
  if (!o.profile_csv.empty()) {
    const auto profile = o.profile_bins == 0 ? scd::oracle::alpha_profile_native(est)
                                             : scd::oracle::alpha_profile(est, o.profile_bins);
    scd::write_profile_csv(o.profile_csv, profile);
  }
  std::cout << "bins=" << est.values.size() << "\n"
            << "grid=" << grid.rows << "x" << grid.cols << "\n"
            << "hash=" << std::hex << scd::content_hash(std::span<const T>(est.values)) << std::dec << "\n";
}

template <std::floating_point T>
void run_fam(const FamOptions& o) {
  const auto cfg = fam_config(o);
  const auto x = scd::convert<T, double>(load_input(o.in, o.n));
  const auto est = scd::fam_full<T>(x, cfg);
  write_outputs(est, o.out);
}

template <std::floating_point T>
void run_ssca(const SscaOptions& o) {
  const auto cfg = ssca_config(o);
  const auto x = scd::convert<T, double>(load_input(o.in, o.n));
  scd::SscaRunInfo info;
  const auto est = scd::ssca<T>(x, cfg, &info);
  if (info.spilled) std::cout << "spilled_bytes=" << info.spill_bytes << "\n";
  write_outputs(est, o.out);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct BenchOptions {
  std::string estimator = "fam";
  std::size_t repeat = 10;
  std::size_t n = 0;
  std::size_t np = 0;
  std::size_t m1 = 0;
  std::string mode = "2d";
  std::string precision = "f32";
  unsigned threads = 1;
  std::uint64_t seed = 7;
};

template <std::floating_point T>
void run_bench(const BenchOptions& b) {
  std::vector<double> totals;
  std::uint64_t hash = 0;
  std::size_t n = 0;
  if (b.estimator == "fam") {
    FamOptions o;
    o.n = b.n ? b.n : 2048;
    o.np = b.np ? b.np : 256;
    o.threads = b.threads;
    const auto cfg = fam_config(o);
    n = cfg.n;
    const auto x = scd::convert<T, double>(scd::generate_dsss_bpsk({cfg.n, 31, 0.25, 10.0, b.seed}));
    std::vector<double> t_norm, t_frame, t_demod, t_fft2;
    for (std::size_t r = 0; r < b.repeat; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      const auto norm = scd::normalize<T>(x);
      t_norm.push_back(seconds_since(t0));
      t0 = std::chrono::steady_clock::now();
      const auto frames = scd::frame<T>(norm, cfg);
      t_frame.push_back(seconds_since(t0));
      t0 = std::chrono::steady_clock::now();
      const auto xt = scd::demodulate(frames, cfg);
      t_demod.push_back(seconds_since(t0));
      t0 = std::chrono::steady_clock::now();
      const auto est = scd::fam_scd(xt, cfg);
      t_fft2.push_back(seconds_since(t0));
      totals.push_back(t_norm.back() + t_frame.back() + t_demod.back() + t_fft2.back());
      hash = scd::content_hash(std::span<const T>(est.values));
    }
    std::cout << "stage.normalize_s=" << median(t_norm) << "\n"
              << "stage.framing_s=" << median(t_frame) << "\n"
              << "stage.demodulate_s=" << median(t_demod) << "\n"
              << "stage.fft2_s=" << median(t_fft2) << "\n";
  } else {
    SscaOptions o;
    o.n = b.n ? b.n : 65536;
    o.np = b.np ? b.np : 64;
    o.m1 = b.m1;
    o.mode = b.mode;
    o.threads = b.threads;
    const auto cfg = ssca_config(o);
    n = cfg.n;
    const auto x = scd::convert<T, double>(scd::generate_dsss_bpsk({cfg.n, 31, 0.25, 10.0, b.seed}));
    std::vector<double> t_cdp, t_s1, t_s2;
    for (std::size_t r = 0; r < b.repeat; ++r) {
      scd::SscaRunInfo info;
      const auto t0 = std::chrono::steady_clock::now();
      const auto est = scd::ssca<T>(x, cfg, &info);
      totals.push_back(seconds_since(t0));
      t_cdp.push_back(info.cdp_seconds);
      t_s1.push_back(info.stage1_seconds);
      t_s2.push_back(info.stage2_seconds);
      hash = scd::content_hash(std::span<const T>(est.values));
    }
    std::cout << "stage.cdp_s=" << median(t_cdp) << "\n"
              << "stage.stage1_s=" << median(t_s1) << "\n"
              << "stage.stage2_s=" << median(t_s2) << "\n";
  }
  const double med = median(totals);
  std::cout << "estimator=" << b.estimator << "\n"
            << "repeat=" << b.repeat << "\n"
            << "threads=" << b.threads << "\n"
            << "median_s=" << med << "\n"
            << "samples_per_s=" << static_cast<double>(n) / med << "\n"
            << "hash=" << std::hex << hash << std::dec << "\n";
}

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("-o,--output", o.scd1, "SCD1 grid file")->required();
  cmd->add_option("--profile", o.profile_csv, "alpha profile CSV (alpha,value)");
  cmd->add_option("--profile-bins", o.profile_bins, "alpha profile bins (0: one per 1/N)");
  cmd->add_option("--pgm", o.pgm, "PGM (P5) heatmap");
  cmd->add_flag("--log", o.pgm_log, "log10 scaling for the heatmap");
  cmd->add_option("--f-bins", o.f_bins, "grid f bins")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha-bins", o.alpha_bins, "grid alpha bins")->check(CLI::PositiveNumber);
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("-i,--input", in.path, "IQ file (f32 interleaved little-endian)")->required();
  cmd->add_flag("--csv-input", in.csv, "read the input as two-column CSV");
}

int run(int argc, char** argv) {
  CLI::App app{"Spectral correlation density estimation (FAM and SSCA)"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // gen
  scd::DsssBpskConfig gen_cfg{2048, 31, 0.25, 10.0, 0};
  std::string gen_snr = "10";
  std::string gen_out;
  bool gen_csv = false;
  auto* gen = app.add_subcommand("gen", "generate a DSSS BPSK test signal");
  gen->add_option("--n", gen_cfg.n_samples, "samples")->check(CLI::PositiveNumber);
  gen->add_option("--gain", gen_cfg.processing_gain, "chips per symbol")->check(CLI::PositiveNumber);
  gen->add_option("--chip-rate", gen_cfg.chip_rate, "chip rate as a fraction of fs, (0, 0.5]")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 0.5));
  gen->add_option("--snr", gen_snr, "SNR in dB, or inf");
  gen->add_option("--seed", gen_cfg.seed, "RNG seed");
  gen->add_option("-o,--output", gen_out, "output file")->required();
  gen->add_flag("--csv", gen_csv, "write two-column CSV instead of raw IQ");

  // fam
  FamOptions fam_opts;
  auto* fam = app.add_subcommand("fam", "FFT accumulation method");
  add_input_options(fam, fam_opts.in);
  add_output_options(fam, fam_opts.out);
  fam->add_option("--n", fam_opts.n, "window length N");
  fam->add_option("--np", fam_opts.np, "channeliser size Np");
  fam->add_option("--precision", fam_opts.precision)->check(CLI::IsMember({"f32", "f64"}));
  fam->add_option("--threads", fam_opts.threads)->check(CLI::PositiveNumber);
  fam->add_option("--atten", fam_opts.atten_db, "Chebyshev attenuation (dB)");
  fam->add_flag("--no-normalize", fam_opts.no_normalize);

  // ssca
  SscaOptions ssca_opts;
  auto* ssca = app.add_subcommand("ssca", "strip spectral correlation analyser");
  add_input_options(ssca, ssca_opts.in);
  add_output_options(ssca, ssca_opts.out);
  ssca->add_option("--n", ssca_opts.n, "window length N");
  ssca->add_option("--np", ssca_opts.np, "channeliser size Np");
  ssca->add_option("--m1", ssca_opts.m1, "first FFT factor M1, M2 = N/M1 (default: balanced split)");
  ssca->add_option("--mode", ssca_opts.mode)->check(CLI::IsMember({"direct", "2d"}));
  ssca->add_option("--precision", ssca_opts.precision)->check(CLI::IsMember({"f32", "f64"}));
  ssca->add_option("--threads", ssca_opts.threads)->check(CLI::PositiveNumber);
  ssca->add_option("--atten", ssca_opts.atten_db, "Chebyshev attenuation (dB)");
  ssca->add_flag("--no-normalize", ssca_opts.no_normalize);
  ssca->add_option("--mem-cap", ssca_opts.mem_cap, "stage-1 in-memory cap (complex values)");
  ssca->add_option("--spill-path", ssca_opts.spill_path, "stage-1 spill file (kept)");
  ssca->add_option("--block-read", ssca_opts.block_read, "stage-2 block read factor C");

  // compare
  std::string cmp_test, cmp_ref;
  double cmp_tol = 2e-4;
  auto* compare = app.add_subcommand("compare", "relative error of TEST against REFERENCE (SCD1 files)");
  compare->add_option("test", cmp_test)->required();
  compare->add_option("reference", cmp_ref)->required();
  compare->add_option("--tol", cmp_tol, "mean relative error tolerance");

  // plan
  std::string plan_kind;
  std::size_t plan_n = 0, plan_np = 0, plan_m1 = 0, plan_replicas = 1;
  std::string plan_format = "both";
  auto* plan = app.add_subcommand("plan", "AI Engine tile plan");
  plan->add_option("estimator", plan_kind)->required()->check(CLI::IsMember({"fam", "ssca"}));
  plan->add_option("--n", plan_n)->required();
  plan->add_option("--np", plan_np)->required();
  plan->add_option("--m1", plan_m1, "SSCA first FFT factor (default: sqrt-balanced)");
  plan->add_option("--replicas", plan_replicas, "SSCA pipeline replicas");
  plan->add_option("--format", plan_format)->check(CLI::IsMember({"text", "kv", "both"}));

  // bench
  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "host wall-clock timings");
  bench->add_option("estimator", bench_opts.estimator)->required()->check(CLI::IsMember({"fam", "ssca"}));
  bench->add_option("--repeat", bench_opts.repeat)->check(CLI::PositiveNumber);
  bench->add_option("--n", bench_opts.n);
  bench->add_option("--np", bench_opts.np);
  bench->add_option("--m1", bench_opts.m1);
  bench->add_option("--mode", bench_opts.mode)->check(CLI::IsMember({"direct", "2d"}));
  bench->add_option("--precision", bench_opts.precision)->check(CLI::IsMember({"f32", "f64"}));
  bench->add_option("--threads", bench_opts.threads)->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_opts.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) {
    if (gen_snr == "inf" || gen_snr == "+inf") {
      gen_cfg.snr_db = std::numeric_limits<double>::infinity();
    } else {
      try {
        gen_cfg.snr_db = std::stod(gen_snr);
      } catch (const std::exception&) {
        throw scd::ConfigError("--snr must be a number or inf");
      }
    }
    const auto x = scd::generate_dsss_bpsk(gen_cfg);
    if (gen_csv) {
      std::string text = "i,q\n";
      char line[64];
      for (const auto& v : x) {
        std::snprintf(line, sizeof line, "%.9g,%.9g\n", v.real(), v.imag());
        text += line;
      }
      scd::write_file_bytes(gen_out, text);
    } else {
      scd::write_iq<double>(gen_out, x);
    }
    return kExitOk;
  }

  if (fam->parsed()) {
    fam_opts.precision == "f64" ? run_fam<double>(fam_opts) : run_fam<float>(fam_opts);
    return kExitOk;
  }

  if (ssca->parsed()) {
    ssca_opts.precision == "f64" ? run_ssca<double>(ssca_opts) : run_ssca<float>(ssca_opts);
    return kExitOk;
  }

  if (compare->parsed()) {
    const auto test = scd::read_scd1(cmp_test);
    const auto ref = scd::read_scd1(cmp_ref);
    if (!scd::header_of(test).same_layout(scd::header_of(ref))) {
      std::cerr << "compare: grids have different dimensions or extents\n";
      return kExitData;
    }
    const auto t = scd::values_as_double(test);
    const auto r = scd::values_as_double(ref);
    const auto stats = scd::oracle::relative_error(std::span<const double>(t), std::span<const double>(r));
    std::cout << std::setprecision(6) << "mean_rel=" << stats.mean_rel << "\n"
              << "max_rel=" << stats.max_rel << "\n"
              << "mean_abs=" << stats.mean_abs << "\n"
              << "n_bins=" << stats.n_bins << "\n";
    const bool ok = stats.mean_rel <= cmp_tol;
    std::cout << (ok ? "PASS" : "FAIL") << " (tol " << cmp_tol << ")\n";
    return ok ? kExitOk : kExitTolerance;
  }

  if (plan->parsed()) {
    scd::planner::PlanReport report;
    if (plan_kind == "fam") {
      report = scd::planner::plan_fam(plan_n, plan_np);
    } else {
      std::size_t m1 = plan_m1;
      if (m1 == 0) m1 = scd::SscaConfig::make(plan_n, plan_np).m1;
      report = scd::planner::plan_ssca(plan_n, plan_np, m1, {}, plan_replicas);
    }
    if (plan_format != "kv") std::cout << scd::planner::format_text(report);
    if (plan_format != "text") std::cout << scd::planner::format_kv(report);
    return kExitOk;
  }

  if (bench->parsed()) {
    bench_opts.precision == "f64" ? run_bench<double>(bench_opts) : run_bench<float>(bench_opts);
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const scd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const scd::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const scd::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
