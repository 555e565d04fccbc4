#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ttalign {

using real = double;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<real> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const real> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  real& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  real operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<real> data() noexcept { return data_; }
  std::span<const real> data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<real> data_;
};

inline real dot(std::span<const real> a, std::span<const real> b) noexcept {
  real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// y += alpha * x
inline void axpy(real alpha, std::span<const real> x, std::span<real> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace ttalign
