#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ghmdenoise/ghm_transform.hpp"

namespace ghmdenoise {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Strict weak order used everywhere candidates are ranked: by distance, then
/// by smaller window index.
inline bool closer(const Neighbor& a, const Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.index < b.index;
}

/// Closer windows selected for one reference window, ascending by closer().
struct ClosestSet {
  std::size_t ref_idx = 0;
  std::vector<Neighbor> members;
  std::size_t distance_evals = 0;
  /// Trailing members that were added without passing the L2 threshold.
  std::size_t fallback_count = 0;
};

struct SelectionParams {
  std::size_t n_c = 16;
  double l2_t = 0.0;
  bool include_self = true;

  void validate() const;
};

/// Euclidean distance between coefficient matrices.
double l2_distance(const TransformedWindow& a, const TransformedWindow& b);

/// Scans every window j (skipping ref_idx unless include_self), keeps those with
/// distance <= l2_t, and returns the n_c closest.
ClosestSet exhaustive_select(std::size_t ref_idx, std::span<const TransformedWindow> all,
                             const SelectionParams& p);

/// Empirical quantile (nearest rank) of the distance between sample_pairs
/// uniformly drawn pairs of distinct windows. quantile is in (0, 1].
///
/// If the quantile is zero the smallest positive double is returned instead,
/// with a warning on std::clog when every sampled distance is zero.
double calibrate_l2t(std::span<const TransformedWindow> all, double quantile,
                     std::size_t sample_pairs, std::uint64_t seed);

/// The pair distances calibrate_l2t ranks, in draw order.
std::vector<double> sample_pair_distances(std::span<const TransformedWindow> all,
                                          std::size_t sample_pairs, std::uint64_t seed);

}  // namespace ghmdenoise
