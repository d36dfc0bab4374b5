#pragma once
// Dense symmetric positive-definite kernel: Cholesky, inversion, solves and
// log-determinants for the small (T <= a few hundred) covariance matrices that
// appear in the scoring rules.

#include <cstddef>
#include <span>
#include <vector>

namespace tscore::linalg {

/// Row-major dense matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t dim);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  Matrix transposed() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

/// Square matrix with entries(i,j) == entries(j,i) bitwise.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : m_(dim, dim) {}

  static SymMatrix identity(std::size_t dim);
  /// Throws DomainError unless `m` is square and exactly symmetric.
  static SymMatrix from_dense(Matrix m);
  /// Builds a symmetric matrix from the upper triangle of `m` (lower ignored).
  static SymMatrix from_upper(const Matrix& m);

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  std::span<const double> row(std::size_t i) const { return m_.row(i); }
  const Matrix& dense() const noexcept { return m_; }

private:
  Matrix m_;
};

struct CholeskyFactor {
  /// Lower triangular; strictly positive diagonal.
  Matrix lower;
  std::size_t dim() const noexcept { return lower.rows(); }
};

/// Throws NotPositiveDefinite if a pivot falls to dim * eps * max-diagonal.
CholeskyFactor cholesky(const SymMatrix& m);

SymMatrix invert_spd(const SymMatrix& m);
SymMatrix invert_from_factor(const CholeskyFactor& f);

/// 2 * sum(log(diag(L)))
double log_det(const CholeskyFactor& f);

/// Solves (L L^T) x = b.
std::vector<double> solve(const CholeskyFactor& f, std::span<const double> b);

/// out = m * x
void multiply(const SymMatrix& m, std::span<const double> x, std::span<double> out);

/// x^T m x
double quadratic_form(const SymMatrix& m, std::span<const double> x);

/// Inverse of a lower-triangular matrix with non-zero diagonal.
Matrix lower_triangular_inverse(const Matrix& lower);

/// L L^T for lower-triangular L.
SymMatrix lower_gram(const Matrix& lower);

/// L^T L for lower-triangular L.
SymMatrix lower_gram_transposed(const Matrix& lower);

/// Product of two lower-triangular matrices.
Matrix multiply_lower(const Matrix& a, const Matrix& b);

/// Tridiagonal precision of the stationary AR(1) correlation structure
/// phi^|i-j| / (1 - phi^2). Throws DomainError for |phi| >= 1.
SymMatrix ar1_precision_analytic(double phi, std::size_t T);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace tscore::linalg
