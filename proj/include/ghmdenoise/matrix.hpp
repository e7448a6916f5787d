#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ghmdenoise {

/// Dense row-major matrix of doubles.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);

double frobenius_norm(const RealMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

}  // namespace ghmdenoise
