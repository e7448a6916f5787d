#include "ghmdenoise/ghm_transform.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "ghmdenoise/errors.hpp"

namespace ghmdenoise {

namespace {

using Block = std::array<std::array<double, 2>, 2>;

const double kRoot2 = std::sqrt(2.0);

// Geronimo-Hardin-Massopust filter bank, orthonormal scaling.
const std::array<Block, 4> kLowPass = {{
    {{{3.0 / (5.0 * kRoot2), 4.0 / 5.0}, {-1.0 / 20.0, -3.0 / (10.0 * kRoot2)}}},
    {{{3.0 / (5.0 * kRoot2), 0.0}, {9.0 / 20.0, 1.0 / kRoot2}}},
    {{{0.0, 0.0}, {9.0 / 20.0, -3.0 / (10.0 * kRoot2)}}},
    {{{0.0, 0.0}, {-1.0 / 20.0, 0.0}}},
}};

const std::array<Block, 4> kHighPass = {{
    {{{-1.0 / 20.0, -3.0 / (10.0 * kRoot2)}, {1.0 / (10.0 * kRoot2), 3.0 / 10.0}}},
    {{{9.0 / 20.0, -1.0 / kRoot2}, {-9.0 / (10.0 * kRoot2), 0.0}}},
    {{{9.0 / 20.0, -3.0 / (10.0 * kRoot2)}, {9.0 / (10.0 * kRoot2), -3.0 / 10.0}}},
    {{{-1.0 / 20.0, 0.0}, {-1.0 / (10.0 * kRoot2), 0.0}}},
}};

void check_size(const RealMatrix& values, const TransformMatrix& f) {
  if (values.rows() != f.size() || values.cols() != f.size()) {
    throw ValidationError("window is " + std::to_string(values.rows()) + "x" +
                          std::to_string(values.cols()) + " but transform expects side " +
                          std::to_string(f.size()));
  }
}

}  // namespace

TransformMatrix build_ghm_matrix(std::size_t m) {
  if (m < 8 || m % 4 != 0) {
    throw ValidationError("GHM transform needs a window side that is a multiple of 4 and >= 8, got " +
                          std::to_string(m));
  }
  RealMatrix f(m, m);
  const std::size_t half = m / 2;
  for (std::size_t block_row = 0; block_row < m / 4; ++block_row) {
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t col = (4 * block_row + 2 * k) % m;
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
          f(2 * block_row + r, col + c) = kLowPass[k][r][c];
          f(half + 2 * block_row + r, col + c) = kHighPass[k][r][c];
        }
      }
    }
  }
  TransformMatrix out;
  out.row_sums_.assign(m, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) out.row_sums_[r] += f(r, c);
  out.transposed_ = transpose(f);
  out.entries_ = std::move(f);
  return out;
}

TransformedWindow forward(const RealMatrix& values, const TransformMatrix& f) {
  check_size(values, f);
  return {multiply(multiply(f.entries(), values), f.transposed())};
}

TransformedWindow forward(const Window& w, const TransformMatrix& f) { return forward(w.values, f); }

RealMatrix inverse(const TransformedWindow& w, const TransformMatrix& f) {
  check_size(w.coeffs, f);
  return multiply(multiply(f.transposed(), w.coeffs), f.entries());
}

void write_matrix_csv(const TransformMatrix& f, std::ostream& out) {
  const auto& e = f.entries();
  out << std::setprecision(17);
  for (std::size_t r = 0; r < e.rows(); ++r) {
    for (std::size_t c = 0; c < e.cols(); ++c) {
      if (c > 0) out << ',';
      out << e(r, c);
    }
    out << '\n';
  }
}

}  // namespace ghmdenoise
