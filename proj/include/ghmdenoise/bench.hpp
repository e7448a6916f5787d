#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ghmdenoise/denoise.hpp"

namespace ghmdenoise {

enum class BenchEngine { noisy_only, exhaustive, ga };

std::string_view to_string(BenchEngine e);
/// "noisy-only", "exhaustive" or "ga".
BenchEngine parse_bench_engine(std::string_view name);

/// Sweep description. An image entry is either a PGM path or "phantom:<size>"
/// for the built-in phantom at that size.
struct BenchPlan {
  std::vector<std::string> images = {"phantom:128"};
  std::vector<double> sigmas = {10, 20, 30, 40, 50};
  std::vector<BenchEngine> engines = {BenchEngine::noisy_only, BenchEngine::exhaustive,
                                      BenchEngine::ga};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  /// Template for the denoiser; engine, sigma and seed are set per cell.
  DenoiseConfig denoise;
  /// Wall time is only recorded when enabled, so default reports are
  /// byte-for-byte reproducible.
  bool record_timing = false;

  void validate() const;
};

struct BenchRow {
  std::string image;
  double sigma = 0.0;
  BenchEngine engine = BenchEngine::noisy_only;
  std::uint64_t seed = 0;
  double psnr_noisy = 0.0;
  std::optional<double> psnr_denoised;  ///< empty for noisy-only rows
  std::size_t distance_evals = 0;
  double wall_ms = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

/// Loads an image entry (path or phantom:<size>).
GrayImage load_bench_image(const std::string& entry);

/// Noise seed for one (seed, sigma, image) cell.
std::uint64_t cell_noise_seed(std::uint64_t seed, double sigma, const std::string& image);

/// Rows are ordered image, sigma, seed, engine, following plan order.
BenchReport run_bench(const BenchPlan& plan);

/// Header "image,sigma,engine,seed,psnr_noisy,psnr_denoised,distance_evals,wall_ms"
/// then one row per record. Fields containing a comma, quote or newline are
/// quoted with inner quotes doubled.
void write_csv(const BenchReport& report, std::ostream& out);
/// write_csv to a temporary sibling, then rename into place.
void emit_csv(const BenchReport& report, const std::filesystem::path& path);

/// Aligned table of per-cell means over seeds.
void render_table(const BenchReport& report, std::ostream& out);

}  // namespace ghmdenoise
