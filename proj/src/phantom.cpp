#include <array>
#include <cmath>
#include <numbers>

#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/image.hpp"

namespace ghmdenoise {

namespace {

struct Ellipse {
  double cx, cy, a, b, degrees, value;
};

// Modified Shepp-Logan head, unit square [-1, 1]^2.
constexpr std::array<Ellipse, 10> kHead = {{
    {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
    {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
    {0.22, 0.0, 0.11, 0.31, -18.0, -0.2},
    {-0.22, 0.0, 0.16, 0.41, 18.0, -0.2},
    {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
    {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
    {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
    {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
}};

double head_density(double u, double v) {
  double total = 0.0;
  for (const auto& e : kHead) {
    const double t = e.degrees * std::numbers::pi / 180.0;
    const double du = u - e.cx;
    const double dv = v - e.cy;
    const double ru = du * std::cos(t) + dv * std::sin(t);
    const double rv = -du * std::sin(t) + dv * std::cos(t);
    if ((ru * ru) / (e.a * e.a) + (rv * rv) / (e.b * e.b) <= 1.0) total += e.value;
  }
  return total;
}

}  // namespace

GrayImage make_phantom(std::size_t size) {
  if (size == 0) throw ValidationError("phantom size must be positive");
  constexpr int kSuper = 4;
  GrayImage img(size, size);
  const double n = static_cast<double>(size);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          const double u = 2.0 * (x + (sx + 0.5) / kSuper) / n - 1.0;
          const double v = 1.0 - 2.0 * (y + (sy + 0.5) / kSuper) / n;
          const double d = head_density(u, v);
          // Low-frequency shading inside the body so flat regions are not
          // exact copies of each other.
          const double shade = d > 0.0 ? 6.0 * std::sin(3.0 * std::numbers::pi * u) *
                                             std::cos(2.0 * std::numbers::pi * v)
                                       : 0.0;
          acc += 60.0 + 130.0 * d + shade;
        }
      }
      img.at(x, y) = static_cast<std::uint8_t>(std::lround(acc / (kSuper * kSuper)));
    }
  }
  return img;
}

}  // namespace ghmdenoise
