#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ghmdenoise/bench.hpp"
#include "ghmdenoise/denoise.hpp"
#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/image.hpp"
#include "ghmdenoise/window_select.hpp"

namespace ghmdenoise::cli {

namespace {

// Flags shared by `denoise` and `bench`.
struct DenoiseFlags {
  std::size_t window = DenoiseConfig{}.m;
  std::size_t step = DenoiseConfig{}.s_size;
  std::size_t n_c = DenoiseConfig{}.n_c;
  std::size_t population = DenoiseConfig{}.n_p;
  std::size_t generations = DenoiseConfig{}.g_max;
  std::size_t cp1 = GaParams{}.c_p1;
  std::size_t cp2 = GaParams{}.c_p2;
  std::size_t max_rounds = DenoiseConfig{}.max_rounds;
  double l2t = 0.0;
  double l2t_quantile = DenoiseConfig{}.l2t_quantile;
  std::size_t l2t_pairs = DenoiseConfig{}.l2t_pairs;
  bool exclude_self = false;
  bool average_fallback = false;
  double threshold_scale = DenoiseConfig{}.threshold_scale;

  CLI::Option* cp1_opt = nullptr;
  CLI::Option* cp2_opt = nullptr;
  CLI::Option* l2t_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--window", window, "Window side m (multiple of 4, >= 8)");
    app.add_option("--step", step, "Window step S_size");
    app.add_option("--nc", n_c, "Closer windows kept per reference window (GA gene length)");
    app.add_option("--population", population, "GA population size");
    app.add_option("--generations", generations, "GA generations per round (g_max)");
    cp1_opt = app.add_option("--cp1", cp1,
                             "First crossover point (scaled to keep CR = 0.5 when --nc != 16)");
    cp2_opt = app.add_option("--cp2", cp2,
                             "Second crossover point (scaled to keep CR = 0.5 when --nc != 16)");
    app.add_option("--max-rounds", max_rounds, "GA restart cap before the fallback fill");
    l2t_opt = app.add_option("--l2t", l2t, "Fixed L2 threshold")->default_str("calibrated");
    app.add_option("--l2t-quantile", l2t_quantile, "Quantile of sampled pair distances used as L2 threshold");
    app.add_option("--l2t-pairs", l2t_pairs, "Window pairs sampled for calibration");
    app.add_flag("--exclude-self", exclude_self, "Do not let a window select itself");
    app.add_flag("--average-fallback", average_fallback,
                 "Average GA fallback members that lie outside the L2 threshold");
    app.add_option("--threshold-scale", threshold_scale, "Multiplier on the universal threshold");
  }

  DenoiseConfig to_config() const {
    DenoiseConfig cfg;
    cfg.m = window;
    cfg.s_size = step;
    cfg.n_c = n_c;
    cfg.n_p = population;
    cfg.g_max = generations;
    if (cp1_opt->count() > 0) cfg.c_p1 = cp1;
    if (cp2_opt->count() > 0) cfg.c_p2 = cp2;
    cfg.max_rounds = max_rounds;
    if (l2t_opt->count() > 0) cfg.l2_t = l2t;
    cfg.l2t_quantile = l2t_quantile;
    cfg.l2t_pairs = l2t_pairs;
    cfg.include_self = !exclude_self;
    cfg.average_fallback = average_fallback;
    cfg.threshold_scale = threshold_scale;
    return cfg;
  }
};

std::string format_psnr(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void write_trace(const std::vector<GaTraceRecord>& trace, std::ostream& err) {
  for (const auto& r : trace) {
    nlohmann::ordered_json line = {
        {"ref", r.ref_idx},
        {"round", r.round},
        {"generation", r.generation},
        {"best_fitness", r.best_fitness},
        {"archive_size", r.archive_size},
        {"archive_mean", r.archive_mean},
        {"mutation_rate", r.mutation_rate},
        {"distance_evals", r.distance_evals},
    };
    err << line.dump() << '\n';
  }
}

void check_geometry(const DenoiseConfig& cfg) {
  if (cfg.m < 8 || cfg.m % 4 != 0) {
    throw ValidationError("invalid geometry: --window " + std::to_string(cfg.m) +
                          " must be a multiple of 4 and at least 8");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Window-based GHM multiwavelet denoising with exhaustive or GA window selection"};
  app.name("ghmdenoise");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();  // global --threads may follow the subcommand
  app.set_config("--config", "", "Read key=value defaults from a file; flags win on conflict");

  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = available parallelism)");

  // add-noise
  auto* add_noise = app.add_subcommand("add-noise", "Add white Gaussian noise to a PGM image");
  std::string noise_in, noise_out;
  double noise_sigma = 20.0;
  std::uint64_t noise_seed = 0;
  bool noise_ascii = false;
  add_noise->add_option("-i,--input", noise_in, "Input PGM")->required();
  add_noise->add_option("-o,--output", noise_out, "Output PGM")->required();
  add_noise->add_option("--sigma", noise_sigma, "Noise standard deviation");
  add_noise->add_option("--seed", noise_seed, "Noise seed");
  add_noise->add_flag("--ascii", noise_ascii, "Write P2 instead of P5");

  // denoise
  auto* denoise = app.add_subcommand("denoise", "Denoise a PGM image");
  std::string dn_in, dn_out, dn_reference, dn_dump;
  std::string dn_method = "ga";
  double dn_sigma = 0.0;
  std::uint64_t dn_seed = 0;
  bool dn_trace = false;
  bool dn_ascii = false;
  DenoiseFlags dn_flags;
  denoise->add_option("-i,--input", dn_in, "Noisy input PGM")->required();
  denoise->add_option("-o,--output", dn_out, "Denoised output PGM")->required();
  denoise->add_option("--method", dn_method, "Window selection engine")
      ->check(CLI::IsMember({"ga", "exhaustive"}));
  auto* dn_sigma_opt =
      denoise->add_option("--sigma", dn_sigma, "Known noise level")->default_str("estimated");
  denoise->add_option("--seed", dn_seed, "Seed for calibration and GA streams");
  denoise->add_option("--reference", dn_reference, "Clean image; adds psnr_in/psnr_out to the stats");
  denoise->add_flag("--trace", dn_trace, "Stream GA per-generation records (JSON lines) to stderr");
  denoise->add_option("--dump-transform", dn_dump, "Debug: write the GHM matrix as CSV");
  denoise->add_flag("--ascii", dn_ascii, "Write P2 instead of P5");
  dn_flags.attach(*denoise);

  // psnr
  auto* psnr_cmd = app.add_subcommand("psnr", "PSNR between two PGM images");
  std::string psnr_a, psnr_b;
  psnr_cmd->add_option("a", psnr_a, "First image")->required();
  psnr_cmd->add_option("b", psnr_b, "Second image")->required();

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Print the calibrated L2 threshold for an image");
  std::string cal_in;
  std::size_t cal_window = 16, cal_step = 8, cal_pairs = 1000;
  double cal_quantile = 0.05;
  std::uint64_t cal_seed = 0;
  calibrate->add_option("-i,--input", cal_in, "Input PGM")->required();
  calibrate->add_option("--window", cal_window, "Window side m");
  calibrate->add_option("--step", cal_step, "Window step");
  calibrate->add_option("--quantile", cal_quantile, "Distance quantile");
  calibrate->add_option("--pairs", cal_pairs, "Sampled window pairs");
  calibrate->add_option("--seed", cal_seed, "Sampling seed");

  // bench
  auto* bench = app.add_subcommand("bench", "Sweep noise levels and engines, write a CSV report");
  BenchPlan plan;
  std::vector<std::string> bench_engines = {"noisy-only", "exhaustive", "ga"};
  std::string bench_out = "bench.csv";
  bool bench_timing = false;
  bool bench_table = false;
  DenoiseFlags bench_flags;
  bench->add_option("--images", plan.images, "PGM paths or phantom:<size>")->delimiter(',');
  bench->add_option("--sigmas", plan.sigmas, "Noise levels")->delimiter(',');
  bench->add_option("--engines", bench_engines, "noisy-only, exhaustive, ga")
      ->delimiter(',')
      ->check(CLI::IsMember({"noisy-only", "exhaustive", "ga"}));
  bench->add_option("--seeds", plan.seeds, "Seeds per cell")->delimiter(',');
  bench->add_option("-o,--output", bench_out, "CSV report path");
  bench->add_flag("--timing", bench_timing, "Record wall time (makes the CSV run-dependent)");
  bench->add_flag("--table", bench_table, "Print per-cell means as a table");
  bench_flags.attach(*bench);

  // phantom
  auto* phantom = app.add_subcommand("phantom", "Write the built-in CT-like phantom");
  std::size_t phantom_size = 128;
  std::string phantom_out;
  bool phantom_ascii = false;
  phantom->add_option("--size", phantom_size, "Side length in pixels");
  phantom->add_option("-o,--output", phantom_out, "Output PGM")->required();
  phantom->add_flag("--ascii", phantom_ascii, "Write P2 instead of P5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*add_noise) {
      if (!(noise_sigma >= 0.0)) throw ValidationError("--sigma must be >= 0");
      const GrayImage clean = load_pgm(noise_in);
      save_pgm(add_awgn(clean, {noise_sigma, noise_seed}), noise_out, !noise_ascii);
    } else if (*denoise) {
      DenoiseConfig cfg = dn_flags.to_config();
      cfg.engine = parse_engine(dn_method);
      cfg.seed = dn_seed;
      cfg.threads = threads;
      cfg.collect_trace = dn_trace && cfg.engine == Engine::ga;
      if (dn_sigma_opt->count() > 0) cfg.sigma = dn_sigma;
      check_geometry(cfg);
      cfg.validate();

      const GrayImage noisy = load_pgm(dn_in);
      std::optional<GrayImage> reference;
      if (!dn_reference.empty()) reference = load_pgm(dn_reference);
      if (!dn_dump.empty()) {
        std::ofstream dump(dn_dump);
        if (!dump) throw IoError("cannot open '" + dn_dump + "' for writing");
        write_matrix_csv(build_ghm_matrix(cfg.m), dump);
      }
      DenoiseResult result = denoise_image(noisy, cfg);
      if (reference) {
        result.stats.psnr_in = psnr(*reference, noisy);
        result.stats.psnr_out = psnr(*reference, result.image);
      }
      if (dn_trace) write_trace(result.trace, err);
      save_pgm(result.image, dn_out, !dn_ascii);
      write_run_stats(result.stats, out);
    } else if (*psnr_cmd) {
      const GrayImage a = load_pgm(psnr_a);
      const GrayImage b = load_pgm(psnr_b);
      out << format_psnr(psnr(a, b)) << '\n';
    } else if (*calibrate) {
      if (cal_window < 8 || cal_window % 4 != 0) {
        throw ValidationError("invalid geometry: --window must be a multiple of 4 and at least 8");
      }
      const GrayImage img = load_pgm(cal_in);
      const GridGeometry geom = build_grid(img, cal_window, cal_step);
      const TransformMatrix f = build_ghm_matrix(cal_window);
      std::vector<TransformedWindow> windows;
      windows.reserve(geom.n_w);
      for (std::size_t i = 0; i < geom.n_w; ++i) windows.push_back(forward(window_at(img, geom, i), f));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g", calibrate_l2t(windows, cal_quantile, cal_pairs, cal_seed));
      out << buf << '\n';
    } else if (*bench) {
      plan.engines.clear();
      for (const auto& name : bench_engines) plan.engines.push_back(parse_bench_engine(name));
      plan.denoise = bench_flags.to_config();
      plan.denoise.threads = threads;
      plan.record_timing = bench_timing;
      check_geometry(plan.denoise);
      plan.validate();
      const BenchReport report = run_bench(plan);
      emit_csv(report, bench_out);
      if (bench_table) render_table(report, out);
    } else if (*phantom) {
      save_pgm(make_phantom(phantom_size), phantom_out, !phantom_ascii);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace ghmdenoise::cli
