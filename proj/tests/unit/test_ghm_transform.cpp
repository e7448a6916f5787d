#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/ghm_transform.hpp"
#include "test_support.hpp"

using namespace ghmdenoise;
using ghmdenoise::testing::random_matrix;

namespace {

double frob_diff(const RealMatrix& a, const RealMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

class GhmSizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(GhmSizes, Orthogonal) {
  const std::size_t m = GetParam();
  const TransformMatrix f = build_ghm_matrix(m);
  ASSERT_EQ(f.size(), m);
  EXPECT_LT(max_abs_diff(multiply(f.entries(), f.transposed()), RealMatrix::identity(m)), 1e-12);
  EXPECT_LT(max_abs_diff(multiply(f.transposed(), f.entries()), RealMatrix::identity(m)), 1e-12);
}

TEST_P(GhmSizes, RoundTripRandomWindows) {
  const std::size_t m = GetParam();
  const TransformMatrix f = build_ghm_matrix(m);
  std::mt19937_64 gen(m);
  for (int i = 0; i < 200; ++i) {
    const RealMatrix w = random_matrix(m, gen);
    EXPECT_LE(max_abs_diff(inverse(forward(w, f), f), w), 1e-8);
  }
}

TEST_P(GhmSizes, Parseval) {
  const std::size_t m = GetParam();
  const TransformMatrix f = build_ghm_matrix(m);
  std::mt19937_64 gen(m + 1);
  for (int i = 0; i < 100; ++i) {
    const RealMatrix w = random_matrix(m, gen, -50.0, 300.0);
    const double a = frobenius_norm(w);
    EXPECT_NEAR(frobenius_norm(forward(w, f).coeffs), a, 1e-10 * a);
  }
}

TEST_P(GhmSizes, ForwardInvertsSynthesis) {
  const std::size_t m = GetParam();
  const TransformMatrix f = build_ghm_matrix(m);
  std::mt19937_64 gen(m + 2);
  const RealMatrix e = random_matrix(m, gen, -10.0, 10.0);
  const RealMatrix w = multiply(multiply(f.transposed(), e), f.entries());
  EXPECT_LT(max_abs_diff(forward(w, f).coeffs, e), 1e-10);
}

TEST_P(GhmSizes, Linear) {
  const std::size_t m = GetParam();
  const TransformMatrix f = build_ghm_matrix(m);
  std::mt19937_64 gen(m + 3);
  const RealMatrix a = random_matrix(m, gen);
  const RealMatrix b = random_matrix(m, gen);
  RealMatrix combo(m, m);
  for (std::size_t i = 0; i < m * m; ++i) combo.values()[i] = 2.5 * a.values()[i] - 0.75 * b.values()[i];
  const RealMatrix fa = forward(a, f).coeffs;
  const RealMatrix fb = forward(b, f).coeffs;
  RealMatrix expect(m, m);
  for (std::size_t i = 0; i < m * m; ++i) expect.values()[i] = 2.5 * fa.values()[i] - 0.75 * fb.values()[i];
  EXPECT_LT(max_abs_diff(forward(combo, f).coeffs, expect), 1e-9);
}

TEST_P(GhmSizes, PreservesDistances) {
  const std::size_t m = GetParam();
  const TransformMatrix f = build_ghm_matrix(m);
  std::mt19937_64 gen(m + 4);
  for (int i = 0; i < 100; ++i) {
    const RealMatrix a = random_matrix(m, gen);
    const RealMatrix b = random_matrix(m, gen);
    const double d = frob_diff(a, b);
    EXPECT_NEAR(frob_diff(forward(a, f).coeffs, forward(b, f).coeffs), d, 1e-9 * d);
  }
}

TEST_P(GhmSizes, RowSumsMatchConstantTransform) {
  const std::size_t m = GetParam();
  const TransformMatrix f = build_ghm_matrix(m);
  const RealMatrix c = forward(RealMatrix(m, m, 3.0), f).coeffs;
  const auto r = f.row_sums();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(c(i, j), 3.0 * r[i] * r[j], 1e-10);
  // The second component of every high-pass block row annihilates constants.
  for (std::size_t i = m / 2 + 1; i < m; i += 2) EXPECT_NEAR(r[i], 0.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Sizes, GhmSizes, ::testing::Values(8u, 16u, 32u));

TEST(Ghm, FirstRowOfSize16) {
  const TransformMatrix f = build_ghm_matrix(16);
  const double root2 = std::sqrt(2.0);
  EXPECT_NEAR(f.entries()(0, 0), 3.0 / (5.0 * root2), 1e-15);
  EXPECT_NEAR(f.entries()(0, 1), 0.8, 1e-15);
  EXPECT_NEAR(f.row_sums()[0], 6.0 / (5.0 * root2) + 0.8, 1e-14);
  // Block row 1 is shifted four columns to the right.
  EXPECT_NEAR(f.entries()(2, 4), 3.0 / (5.0 * root2), 1e-15);
  EXPECT_EQ(f.entries()(2, 0), 0.0);
}

TEST(Ghm, LastBlockRowWrapsAround) {
  const TransformMatrix f = build_ghm_matrix(8);
  // Block row 1 of m = 8 starts at column 4; its H2, H3 blocks wrap to columns 0..3.
  EXPECT_NEAR(f.entries()(3, 0), 9.0 / 20.0, 1e-15);
  EXPECT_NEAR(f.entries()(3, 2), -1.0 / 20.0, 1e-15);
}

TEST(Ghm, RejectsBadSizes) {
  EXPECT_THROW(build_ghm_matrix(4), ValidationError);
  EXPECT_THROW(build_ghm_matrix(6), ValidationError);
  EXPECT_THROW(build_ghm_matrix(0), ValidationError);
  EXPECT_THROW(build_ghm_matrix(18), ValidationError);
}

TEST(Ghm, WrongWindowSizeRejected) {
  const TransformMatrix f = build_ghm_matrix(8);
  EXPECT_THROW(forward(RealMatrix(16, 16), f), ValidationError);
  EXPECT_THROW(inverse(TransformedWindow{RealMatrix(4, 4)}, f), ValidationError);
}

TEST(Ghm, ZeroWindowHasZeroCoefficients) {
  const TransformMatrix f = build_ghm_matrix(16);
  const TransformedWindow t = forward(RealMatrix(16, 16), f);
  for (double v : t.coeffs.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(t.split(), 8u);
}

TEST(Ghm, IdentityCoefficientsGiveIdentityWindow) {
  const TransformMatrix f = build_ghm_matrix(16);
  EXPECT_LT(max_abs_diff(inverse(TransformedWindow{RealMatrix::identity(16)}, f), RealMatrix::identity(16)),
            1e-12);
}

TEST(Ghm, CsvDump) {
  const TransformMatrix f = build_ghm_matrix(8);
  std::ostringstream out;
  write_matrix_csv(f, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(cells, cell, ',')) {
      EXPECT_NEAR(std::stod(cell), f.entries()(rows, col), 1e-15);
      ++col;
    }
    EXPECT_EQ(col, 8u);
    ++rows;
  }
  EXPECT_EQ(rows, 8u);
}
