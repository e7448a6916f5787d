#include "ghmdenoise/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "ghmdenoise/errors.hpp"

namespace ghmdenoise {

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product shape mismatch");
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

double frobenius_norm(const RealMatrix& a) {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return std::sqrt(sum);
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("matrix shape mismatch");
  double worst = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
  return worst;
}

}  // namespace ghmdenoise
