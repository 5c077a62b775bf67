#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace affsteer {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Symmetric matrices use the same type;
// routines that need symmetry check it on entry.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
// Dense product, computed by the parallel gemm kernel.
Matrix operator*(const Matrix& a, const Matrix& b);

Vector matvec(const Matrix& a, std::span<const double> x);
Matrix outer(std::span<const double> x, std::span<const double> y);
// (a + aᵀ)/2
Matrix symmetrize(const Matrix& a);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double trace(const Matrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
double squared_distance(std::span<const double> x, std::span<const double> y);
Vector operator+(std::span<const double> x, std::span<const double> y);
Vector operator-(std::span<const double> x, std::span<const double> y);
Vector scaled(double s, std::span<const double> x);

}  // namespace affsteer
