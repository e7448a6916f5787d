#include "ghmdenoise/denoise.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/parallel.hpp"

namespace ghmdenoise {

std::string_view to_string(Engine e) { return e == Engine::ga ? "ga" : "exhaustive"; }

Engine parse_engine(std::string_view name) {
  if (name == "exhaustive") return Engine::exhaustive;
  if (name == "ga") return Engine::ga;
  throw ValidationError("unknown selection engine '" + std::string(name) + "'");
}

GaParams DenoiseConfig::ga_params(double threshold) const {
  GaParams p = GaParams::for_gene_length(n_c);
  p.n_p = n_p;
  p.g_max = g_max;
  if (c_p1) p.c_p1 = *c_p1;
  if (c_p2) p.c_p2 = *c_p2;
  p.max_rounds = max_rounds;
  p.l2_t = threshold;
  p.seed = seed;
  return p;
}

void DenoiseConfig::validate() const {
  if (m < 8 || m % 4 != 0) {
    throw ValidationError("window size " + std::to_string(m) +
                          " must be a multiple of 4 and at least 8");
  }
  if (s_size < 1 || s_size > m) throw ValidationError("step size must lie in [1, window size]");
  if (n_c < 1) throw ValidationError("n_c must be >= 1");
  if (l2_t && !(*l2_t > 0.0)) throw ValidationError("L2 threshold must be > 0");
  if (!(l2t_quantile > 0.0 && l2t_quantile <= 1.0)) {
    throw ValidationError("L2 threshold quantile must lie in (0, 1]");
  }
  if (l2t_pairs < 100) throw ValidationError("calibration needs at least 100 sample pairs");
  if (sigma && !(*sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
  if (!(threshold_scale > 0.0)) throw ValidationError("threshold scale must be > 0");
  if (engine == Engine::ga) {
    // Window count is checked later against the actual grid.
    ga_params(1.0).validate(std::numeric_limits<std::size_t>::max());
  }
}

namespace {

std::string format_psnr(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void write_run_stats(const RunStats& s, std::ostream& out) {
  char buf[64];
  out << "engine=" << to_string(s.engine) << '\n';
  out << "m=" << s.m << '\n';
  out << "s_size=" << s.s_size << '\n';
  out << "n_c=" << s.n_c << '\n';
  out << "n_w=" << s.n_w << '\n';
  std::snprintf(buf, sizeof buf, "%.6g", s.sigma);
  out << "sigma=" << buf << '\n';
  out << "sigma_estimated=" << (s.sigma_estimated ? "true" : "false") << '\n';
  std::snprintf(buf, sizeof buf, "%.6g", s.l2_t);
  out << "l2_t=" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.6g", s.threshold);
  out << "threshold=" << buf << '\n';
  if (s.psnr_in) out << "psnr_in=" << format_psnr(*s.psnr_in) << '\n';
  if (s.psnr_out) out << "psnr_out=" << format_psnr(*s.psnr_out) << '\n';
  out << "distance_evals=" << s.distance_evals << '\n';
  out << "fallback_members=" << s.fallback_members << '\n';
  std::snprintf(buf, sizeof buf, "%.1f", s.wall_ms);
  out << "wall_ms=" << buf << '\n';
  out << "seed=" << s.seed << '\n';
}

double estimate_sigma(const GrayImage& img, const TransformMatrix& f) {
  const std::size_t m = f.size();
  const GridGeometry geom = build_grid(img, m, m);
  const std::size_t half = m / 2;
  std::vector<double> magnitudes;
  magnitudes.reserve(geom.n_w * (m / 4) * (m / 4));
  for (std::size_t i = 0; i < geom.n_w; ++i) {
    const TransformedWindow w = forward(window_at(img, geom, i), f);
    for (std::size_t r = half + 1; r < m; r += 2)
      for (std::size_t c = half + 1; c < m; c += 2) magnitudes.push_back(std::abs(w.coeffs(r, c)));
  }
  const std::size_t mid = magnitudes.size() / 2;
  std::nth_element(magnitudes.begin(), magnitudes.begin() + static_cast<std::ptrdiff_t>(mid),
                   magnitudes.end());
  double median = magnitudes[mid];
  if (magnitudes.size() % 2 == 0) {
    const double lower =
        *std::max_element(magnitudes.begin(), magnitudes.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return median / 0.6745;
}

TransformedWindow soft_threshold(const TransformedWindow& w, double t) {
  if (!(t >= 0.0)) throw ValidationError("threshold must be >= 0");
  TransformedWindow out = w;
  const std::size_t split = w.split();
  for (std::size_t r = 0; r < w.size(); ++r) {
    for (std::size_t c = 0; c < w.size(); ++c) {
      if (r < split && c < split) continue;
      const double x = out.coeffs(r, c);
      out.coeffs(r, c) = std::copysign(std::max(std::abs(x) - t, 0.0), x);
    }
  }
  return out;
}

RealMatrix denoise_window(const TransformedWindow& ref, std::span<const TransformedWindow> all,
                          const ClosestSet& closers, double t, const TransformMatrix& f) {
  TransformedWindow mean = ref;
  auto acc = mean.coeffs.values();
  for (const auto& member : closers.members) {
    const auto v = all[member.index].coeffs.values();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
  }
  const double count = static_cast<double>(closers.members.size() + 1);
  for (double& x : acc) x /= count;

  const auto r = f.row_sums();
  const std::size_t m = f.size();
  double dc = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) dc += r[i] * mean.coeffs(i, j) * r[j];
  dc /= static_cast<double>(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) mean.coeffs(i, j) -= dc * r[i] * r[j];

  TransformedWindow shrunk = soft_threshold(mean, t);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) shrunk.coeffs(i, j) += dc * r[i] * r[j];
  return inverse(shrunk, f);
}

Accumulator::Accumulator(std::size_t width, std::size_t height)
    : width_(width), height_(height), sum_(width * height, 0.0), weight_(width * height, 0) {}

void Accumulator::place(std::size_t origin_x, std::size_t origin_y, const RealMatrix& patch) {
  if (origin_x + patch.cols() > width_ || origin_y + patch.rows() > height_) {
    throw ValidationError("patch does not fit inside the accumulator");
  }
  for (std::size_t r = 0; r < patch.rows(); ++r) {
    for (std::size_t c = 0; c < patch.cols(); ++c) {
      const std::size_t at = (origin_y + r) * width_ + origin_x + c;
      sum_[at] += patch(r, c);
      ++weight_[at];
    }
  }
}

GrayImage Accumulator::to_image() const {
  GrayImage out(width_, height_);
  auto pixels = out.pixels();
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    if (weight_[i] == 0) throw std::logic_error("pixel not covered by any window");
    const double v = std::round(sum_[i] / weight_[i]);
    pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

GrayImage aggregate(std::span<const RealMatrix> patches, const GridGeometry& geom) {
  if (patches.size() != geom.n_w) throw ValidationError("need one patch per window");
  Accumulator acc(geom.image_width, geom.image_height);
  for (std::size_t i = 0; i < patches.size(); ++i) acc.place(geom.origin_x(i), geom.origin_y(i), patches[i]);
  return acc.to_image();
}

double universal_threshold(double sigma, std::size_t m, double scale) {
  return scale * sigma * std::sqrt(2.0 * std::log(static_cast<double>(m * m)));
}

DenoiseResult denoise_image(const GrayImage& noisy, const DenoiseConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const GridGeometry geom = build_grid(noisy, cfg.m, cfg.s_size);
  const TransformMatrix f = build_ghm_matrix(cfg.m);
  const std::size_t threads = cfg.threads;

  std::vector<TransformedWindow> windows(geom.n_w);
  parallel_for(geom.n_w, threads,
               [&](std::size_t i) { windows[i] = forward(window_at(noisy, geom, i), f); });

  DenoiseResult result;
  RunStats& stats = result.stats;
  stats.engine = cfg.engine;
  stats.m = cfg.m;
  stats.s_size = cfg.s_size;
  stats.n_c = cfg.n_c;
  stats.n_w = geom.n_w;
  stats.seed = cfg.seed;
  stats.sigma_estimated = !cfg.sigma.has_value();
  stats.sigma = cfg.sigma ? *cfg.sigma : estimate_sigma(noisy, f);
  stats.threshold = universal_threshold(stats.sigma, cfg.m, cfg.threshold_scale);
  stats.l2_t = cfg.l2_t ? *cfg.l2_t : calibrate_l2t(windows, cfg.l2t_quantile, cfg.l2t_pairs, cfg.seed);

  std::vector<RealMatrix> patches(geom.n_w);
  std::vector<std::size_t> evals(geom.n_w, 0);
  std::vector<std::size_t> fallbacks(geom.n_w, 0);
  std::vector<std::vector<GaTraceRecord>> traces(cfg.collect_trace ? geom.n_w : 0);

  if (cfg.engine == Engine::exhaustive) {
    SelectionParams sel{cfg.n_c, stats.l2_t, cfg.include_self};
    parallel_for(geom.n_w, threads, [&](std::size_t i) {
      const ClosestSet set = exhaustive_select(i, windows, sel);
      evals[i] = set.distance_evals;
      patches[i] = denoise_window(windows[i], windows, set, stats.threshold, f);
    });
  } else {
    const GaParams gp = cfg.ga_params(stats.l2_t);
    gp.validate(geom.n_w);
    parallel_for(geom.n_w, threads, [&](std::size_t i) {
      GaObserver observer;
      if (cfg.collect_trace) {
        observer = [&traces, i](const GaGeneration& g) { traces[i].push_back(make_trace_record(g)); };
      }
      GaResult run = ga_select(i, windows, gp, observer);
      evals[i] = run.selection.distance_evals;
      fallbacks[i] = run.selection.fallback_count;
      if (!cfg.average_fallback) {
        run.selection.members.resize(run.selection.members.size() - run.selection.fallback_count);
        run.selection.fallback_count = 0;
      }
      patches[i] = denoise_window(windows[i], windows, run.selection, stats.threshold, f);
    });
  }

  result.image = aggregate(patches, geom);
  for (std::size_t i = 0; i < geom.n_w; ++i) {
    stats.distance_evals += evals[i];
    stats.fallback_members += fallbacks[i];
  }
  for (auto& t : traces) result.trace.insert(result.trace.end(), t.begin(), t.end());
  stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace ghmdenoise
