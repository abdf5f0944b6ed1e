#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mpeccq/rational.hpp"

namespace mpeccq {

/// Dense row-major rational matrix. The column count is kept even when there are
/// no rows, so empty constraint blocks still carry their ambient dimension.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec row_vec(std::size_t i) const;
  Vec col_vec(std::size_t j) const;
  std::vector<Vec> to_rows() const;

  void append_row(std::span<const Rational> r);
  void append_rows(const Matrix& other);

  Matrix transpose() const;
  Vec multiply(std::span<const Rational> x) const;
  Matrix multiply(const Matrix& other) const;
  /// Columns `first..first+count` as a new matrix.
  Matrix col_block(std::size_t first, std::size_t count) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace mpeccq
