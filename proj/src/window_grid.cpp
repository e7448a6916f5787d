#include "ghmdenoise/window_grid.hpp"

#include <algorithm>
#include <string>

#include "ghmdenoise/errors.hpp"

namespace ghmdenoise {

namespace {

std::size_t positions_along(std::size_t extent, std::size_t m, std::size_t step) {
  const std::size_t span = extent - m;
  return span / step + 1 + (span % step != 0 ? 1 : 0);
}

}  // namespace

std::size_t GridGeometry::origin_x(std::size_t idx) const {
  return std::min((idx % cols) * s_size, image_width - m);
}

std::size_t GridGeometry::origin_y(std::size_t idx) const {
  return std::min((idx / cols) * s_size, image_height - m);
}

GridGeometry build_grid(std::size_t width, std::size_t height, std::size_t m, std::size_t s_size) {
  if (m < 4 || m % 4 != 0) {
    throw ValidationError("window size " + std::to_string(m) + " must be a positive multiple of 4");
  }
  if (s_size < 1 || s_size > m) {
    throw ValidationError("step size " + std::to_string(s_size) + " must lie in [1, " +
                          std::to_string(m) + "]");
  }
  if (m > width || m > height) {
    throw ValidationError("window size " + std::to_string(m) + " exceeds image extent " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
  GridGeometry g;
  g.m = m;
  g.s_size = s_size;
  g.image_width = width;
  g.image_height = height;
  g.cols = positions_along(width, m, s_size);
  g.rows = positions_along(height, m, s_size);
  g.n_w = g.rows * g.cols;
  return g;
}

GridGeometry build_grid(const GrayImage& img, std::size_t m, std::size_t s_size) {
  return build_grid(img.width(), img.height(), m, s_size);
}

Window window_at(const GrayImage& img, const GridGeometry& geom, std::size_t idx) {
  if (idx >= geom.n_w) {
    throw ValidationError("window index " + std::to_string(idx) + " out of range [0, " +
                          std::to_string(geom.n_w) + ")");
  }
  if (img.width() != geom.image_width || img.height() != geom.image_height) {
    throw ValidationError("image does not match grid geometry");
  }
  Window w;
  w.origin_x = geom.origin_x(idx);
  w.origin_y = geom.origin_y(idx);
  w.values = RealMatrix(geom.m, geom.m);
  for (std::size_t r = 0; r < geom.m; ++r)
    for (std::size_t c = 0; c < geom.m; ++c)
      w.values(r, c) = img.at(w.origin_x + c, w.origin_y + r);
  return w;
}

}  // namespace ghmdenoise
