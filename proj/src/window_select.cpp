#include "ghmdenoise/window_select.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/rng.hpp"

namespace ghmdenoise {

void SelectionParams::validate() const {
  if (n_c < 1) throw ValidationError("n_c must be >= 1");
  if (!(l2_t > 0.0)) throw ValidationError("L2 threshold must be > 0");
}

double l2_distance(const TransformedWindow& a, const TransformedWindow& b) {
  const auto va = a.coeffs.values();
  const auto vb = b.coeffs.values();
  if (a.coeffs.rows() != b.coeffs.rows() || a.coeffs.cols() != b.coeffs.cols()) {
    throw ValidationError("cannot compare windows of different sizes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

ClosestSet exhaustive_select(std::size_t ref_idx, std::span<const TransformedWindow> all,
                             const SelectionParams& p) {
  p.validate();
  if (ref_idx >= all.size()) {
    throw ValidationError("reference window " + std::to_string(ref_idx) + " out of range");
  }
  ClosestSet out;
  out.ref_idx = ref_idx;
  std::vector<Neighbor> passing;
  for (std::size_t j = 0; j < all.size(); ++j) {
    if (j == ref_idx && !p.include_self) continue;
    const double d = l2_distance(all[ref_idx], all[j]);
    ++out.distance_evals;
    if (d <= p.l2_t) passing.push_back({j, d});
  }
  const std::size_t keep = std::min(p.n_c, passing.size());
  std::partial_sort(passing.begin(), passing.begin() + static_cast<std::ptrdiff_t>(keep),
                    passing.end(), closer);
  passing.resize(keep);
  out.members = std::move(passing);
  return out;
}

std::vector<double> sample_pair_distances(std::span<const TransformedWindow> all,
                                          std::size_t sample_pairs, std::uint64_t seed) {
  if (all.size() < 2) throw ValidationError("need at least two windows to calibrate");
  Rng rng(seed);
  std::vector<double> dists;
  dists.reserve(sample_pairs);
  for (std::size_t k = 0; k < sample_pairs; ++k) {
    const std::size_t i = rng.uniform_index(all.size());
    std::size_t j = rng.uniform_index(all.size() - 1);
    if (j >= i) ++j;
    dists.push_back(l2_distance(all[i], all[j]));
  }
  return dists;
}

double calibrate_l2t(std::span<const TransformedWindow> all, double quantile,
                     std::size_t sample_pairs, std::uint64_t seed) {
  if (!(quantile > 0.0 && quantile <= 1.0)) throw ValidationError("quantile must lie in (0, 1]");
  if (sample_pairs < 100) throw ValidationError("calibration needs at least 100 sample pairs");
  std::vector<double> dists = sample_pair_distances(all, sample_pairs, seed);

  const auto rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(dists.size())));
  const std::size_t pos = std::clamp<std::size_t>(rank, 1, dists.size()) - 1;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(pos), dists.end());
  const double value = dists[pos];
  if (value > 0.0) return value;

  if (*std::max_element(dists.begin(), dists.end()) == 0.0) {
    std::clog << "warning: every sampled window distance is zero (constant image); "
                 "using the smallest positive L2 threshold\n";
  }
  return std::numeric_limits<double>::denorm_min();
}

}  // namespace ghmdenoise
