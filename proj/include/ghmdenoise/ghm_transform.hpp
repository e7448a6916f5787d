#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ghmdenoise/matrix.hpp"
#include "ghmdenoise/window_grid.hpp"

namespace ghmdenoise {

/// Single-level GHM multiwavelet analysis matrix for windows of side m.
///
/// Rows 0..m/2-1 hold m/4 block-rows of the 2x2 low-pass matrices H0..H3,
/// rows m/2..m-1 hold m/4 block-rows of the high-pass G0..G3. Block-row k
/// places its four matrices at scalar columns 4k, 4k+2, 4k+4, 4k+6 (mod m).
/// The matrix is orthogonal, so the inverse transform is its transpose.
class TransformMatrix {
 public:
  std::size_t size() const { return entries_.rows(); }
  const RealMatrix& entries() const { return entries_; }
  const RealMatrix& transposed() const { return transposed_; }
  /// F * 1. The transform of a constant window c is c * r * r^T for these
  /// row sums r; the high-pass entries of r are not all zero.
  std::span<const double> row_sums() const { return row_sums_; }

 private:
  friend TransformMatrix build_ghm_matrix(std::size_t m);
  RealMatrix entries_;
  RealMatrix transposed_;
  std::vector<double> row_sums_;
};

/// Throws ValidationError unless m >= 8 and m % 4 == 0.
TransformMatrix build_ghm_matrix(std::size_t m);

/// Coefficients of one window. The top-left split() x split() quadrant is the
/// low-pass band; everything else is detail.
struct TransformedWindow {
  RealMatrix coeffs;

  std::size_t size() const { return coeffs.rows(); }
  std::size_t split() const { return coeffs.rows() / 2; }
};

/// coeffs = F * values * F^T
TransformedWindow forward(const RealMatrix& values, const TransformMatrix& f);
TransformedWindow forward(const Window& w, const TransformMatrix& f);

/// values = F^T * coeffs * F
RealMatrix inverse(const TransformedWindow& w, const TransformMatrix& f);

/// Debug dump, one matrix row per line, 17 significant digits.
void write_matrix_csv(const TransformMatrix& f, std::ostream& out);

}  // namespace ghmdenoise
