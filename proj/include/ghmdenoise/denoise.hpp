#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghmdenoise/ga_select.hpp"
#include "ghmdenoise/ghm_transform.hpp"
#include "ghmdenoise/image.hpp"
#include "ghmdenoise/window_grid.hpp"
#include "ghmdenoise/window_select.hpp"

namespace ghmdenoise {

enum class Engine { exhaustive, ga };

std::string_view to_string(Engine e);
/// Accepts "exhaustive" or "ga"; throws ValidationError otherwise.
Engine parse_engine(std::string_view name);

struct DenoiseConfig {
  std::size_t m = 16;
  std::size_t s_size = 8;
  Engine engine = Engine::exhaustive;

  std::size_t n_c = 16;
  bool include_self = true;
  std::optional<double> l2_t;  ///< fixed threshold; calibrated when empty
  double l2t_quantile = 0.05;
  std::size_t l2t_pairs = 1000;

  // GA-only settings. Crossover points default to GaParams::for_gene_length(n_c).
  std::size_t n_p = 10;
  std::size_t g_max = 100;
  std::optional<std::size_t> c_p1;
  std::optional<std::size_t> c_p2;
  std::size_t max_rounds = 5;

  /// Also average GA members added by the fallback fill (outside l2_t).
  bool average_fallback = false;

  std::optional<double> sigma;  ///< known noise level; estimated when empty
  double threshold_scale = 0.5;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  ///< 0 = hardware concurrency
  bool collect_trace = false;

  void validate() const;
  /// GA parameters for a given L2 threshold.
  GaParams ga_params(double l2_t) const;
};

struct RunStats {
  Engine engine = Engine::exhaustive;
  std::size_t m = 0;
  std::size_t s_size = 0;
  std::size_t n_c = 0;
  std::size_t n_w = 0;
  double sigma = 0.0;
  bool sigma_estimated = false;
  double l2_t = 0.0;
  double threshold = 0.0;
  std::size_t distance_evals = 0;
  std::size_t fallback_members = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> psnr_in;
  std::optional<double> psnr_out;
};

/// key=value lines; fields without a value (psnr without a reference) are
/// omitted. "inf" stands for infinite PSNR.
void write_run_stats(const RunStats& stats, std::ostream& out);

struct DenoiseResult {
  GrayImage image;
  RunStats stats;
  std::vector<GaTraceRecord> trace;  ///< GA runs only, ordered by reference window
};

/// MAD noise estimate from the finest detail coefficients of non-overlapping
/// windows: those in the high-pass band on both axes whose row and column
/// belong to the second multiwavelet component. Those coefficients vanish on
/// constant input. Returns median(|c|) / 0.6745.
double estimate_sigma(const GrayImage& img, const TransformMatrix& f);

/// Soft shrinkage of every coefficient outside the top-left low-pass quadrant.
TransformedWindow soft_threshold(const TransformedWindow& w, double t);

/// Mean of ref and its closer windows, shrunk by t, transformed back.
///
/// The shrinkage acts on the mean window minus its average intensity: the
/// constant part mu * r * r^T (r = F.row_sums()) is split off before
/// soft_threshold and added back afterwards, since the GHM high-pass rows do
/// not annihilate constants.
RealMatrix denoise_window(const TransformedWindow& ref, std::span<const TransformedWindow> all,
                          const ClosestSet& closers, double t, const TransformMatrix& f);

/// Overlap-add reconstruction with uniform weights.
class Accumulator {
 public:
  Accumulator(std::size_t width, std::size_t height);

  void place(std::size_t origin_x, std::size_t origin_y, const RealMatrix& patch);

  /// round(sum / weight) clamped to [0, 255]. Throws std::logic_error if
  /// some pixel received no patch.
  GrayImage to_image() const;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> sum_;
  std::vector<std::uint32_t> weight_;
};

/// Places patches[i] at window i of geom and reconstructs.
GrayImage aggregate(std::span<const RealMatrix> patches, const GridGeometry& geom);

/// Universal threshold scale * sigma * sqrt(2 ln(m^2)).
double universal_threshold(double sigma, std::size_t m, double scale);

DenoiseResult denoise_image(const GrayImage& noisy, const DenoiseConfig& cfg);

}  // namespace ghmdenoise
