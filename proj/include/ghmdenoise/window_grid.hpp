#pragma once

#include <cstddef>

#include "ghmdenoise/image.hpp"
#include "ghmdenoise/matrix.hpp"

namespace ghmdenoise {

/// Lattice of square m x m windows stepped by s_size in both axes.
///
/// Along each axis the origins are 0, s, 2s, ... while they fit; if the last
/// regular window stops short of the image edge, one extra window clamped to
/// offset (extent - m) is appended so every pixel is covered. Windows are
/// numbered row-major: index = row * cols + col.
struct GridGeometry {
  std::size_t m = 16;
  std::size_t s_size = 8;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t n_w = 0;
  std::size_t image_width = 0;
  std::size_t image_height = 0;

  std::size_t origin_x(std::size_t idx) const;
  std::size_t origin_y(std::size_t idx) const;
};

struct Window {
  std::size_t origin_x = 0;
  std::size_t origin_y = 0;
  RealMatrix values;
};

/// Throws ValidationError unless m >= 4, m % 4 == 0, 1 <= s_size <= m and
/// m fits inside the image.
GridGeometry build_grid(std::size_t width, std::size_t height, std::size_t m, std::size_t s_size);
GridGeometry build_grid(const GrayImage& img, std::size_t m, std::size_t s_size);

Window window_at(const GrayImage& img, const GridGeometry& geom, std::size_t idx);

}  // namespace ghmdenoise
