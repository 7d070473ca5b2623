#pragma once

// Exact integer and rational linear algebra: elimination, integral
// diagonalization with transforms, and LLL lattice reduction.

#include <cstddef>
#include <optional>
#include <vector>

#include "bloch/arith/real.hpp"

namespace bloch {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
std::vector<Integer> multiply(const IntMatrix& a, const std::vector<Integer>& x);
std::vector<Rational> multiply(const IntMatrix& a, const std::vector<Rational>& x);

Rational determinant(RatMatrix m);

// Rank over Q.
std::size_t rank(const IntMatrix& m);

// Indices of a maximal set of linearly independent rows, chosen greedily
// from the top.
std::vector<std::size_t> independent_rows(const IntMatrix& m);

// Some solution of A x = b over Q (free variables set to zero), or nullopt.
std::optional<std::vector<Rational>> solve_rational(const IntMatrix& a, const std::vector<Integer>& b);

// Basis of the rational kernel, each vector scaled to a primitive integer vector.
std::vector<std::vector<Integer>> integer_kernel(const IntMatrix& a);

// U * A * V = D with U, V unimodular and D diagonal (nonnegative entries,
// nonzero ones first). V_inverse is V^{-1}.
struct Diagonalization {
  IntMatrix d;
  IntMatrix u;
  IntMatrix v;
  IntMatrix v_inverse;
  std::size_t rank = 0;
};
Diagonalization diagonalize(const IntMatrix& a);

// Some integral solution of A x = b, or nullopt if none exists.
std::optional<std::vector<Integer>> solve_integral(const IntMatrix& a, const std::vector<Integer>& b);

// LLL reduction (delta = 3/4) of the lattice spanned by the rows of `basis`,
// which must be linearly independent. Exact integer arithmetic.
IntMatrix lll_reduce(const IntMatrix& basis);

Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b);
Integer gcd_of(const std::vector<Integer>& v);

}  // namespace bloch
