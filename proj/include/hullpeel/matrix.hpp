#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hullpeel {

/// Dense row-major matrix of doubles. Rows are points / samples, columns are
/// coordinates / features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Builds a matrix from row vectors. Throws kDimensionMismatch on ragged
  /// input and kEmptyInput when there are no rows or no columns.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double> column(std::size_t c) const;

  /// Rows selected by index, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  void append_row(std::span<const double> values);

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace hullpeel
