#include "tscore/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tscore/error.hpp"
#include "tscore/kernels.hpp"

namespace tscore::linalg {

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "matrix product of incompatible shapes");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k), out);
    }
  }
  return c;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i) s.m_(i, i) = 1.0;
  return s;
}

SymMatrix SymMatrix::from_dense(Matrix m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DomainError, "symmetric matrix must be square");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i))
        throw Error(ErrorCode::DomainError, "matrix is not symmetric at (" + std::to_string(i) +
                                                "," + std::to_string(j) + ")");
  SymMatrix s;
  s.m_ = std::move(m);
  return s;
}

SymMatrix SymMatrix::from_upper(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DomainError, "symmetric matrix must be square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, m(i, j));
  return s;
}

CholeskyFactor cholesky(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "cholesky of an empty matrix");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
  const double threshold = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto lj = l.row(j);
    const double pivot = m(j, j) - kernels::sum_squares(lj.first(j));
    if (!(pivot > threshold))
      throw Error(ErrorCode::NotPositiveDefinite,
                  "pivot " + std::to_string(pivot) + " at column " + std::to_string(j));
    const double d = std::sqrt(pivot);
    lj[j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      auto li = l.row(i);
      li[j] = (m(i, j) - kernels::dot(li.first(j), lj.first(j))) / d;
    }
  }
  return CholeskyFactor{std::move(l)};
}

Matrix lower_triangular_inverse(const Matrix& lower) {
  const std::size_t n = lower.rows();
  Matrix inv(n, n);
  std::vector<double> x(n);
  // Column c of L^{-1} by forward substitution against e_c.
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(x.begin(), x.end(), 0.0);
    x[c] = 1.0 / lower(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double s = kernels::dot(lower.row(r).subspan(c, r - c),
                                    std::span<const double>(x).subspan(c, r - c));
      x[r] = -s / lower(r, r);
    }
    for (std::size_t r = c; r < n; ++r) inv(r, c) = x[r];
  }
  return inv;
}

SymMatrix invert_from_factor(const CholeskyFactor& f) {
  const std::size_t n = f.dim();
  // (L L^T)^{-1} = L^{-T} L^{-1}; with U = (L^{-1})^T stored row-wise,
  // entry (i, j) is the dot of rows i and j of U from max(i, j) onward.
  const Matrix u = lower_triangular_inverse(f.lower).transposed();
  SymMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ui = u.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto uj = u.row(j);
      inv.set(i, j, kernels::dot(ui.subspan(j), uj.subspan(j)));
    }
  }
  return inv;
}

SymMatrix invert_spd(const SymMatrix& m) { return invert_from_factor(cholesky(m)); }

double log_det(const CholeskyFactor& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) s += std::log(f.lower(i, i));
  return 2.0 * s;
}

std::vector<double> solve(const CholeskyFactor& f, std::span<const double> b) {
  const std::size_t n = f.dim();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side length");
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = f.lower.row(i);
    y[i] = (y[i] - kernels::dot(li.first(i), std::span<const double>(y).first(i))) / li[i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= f.lower(k, ii) * y[k];
    y[ii] = s / f.lower(ii, ii);
  }
  return y;
}

void multiply(const SymMatrix& m, std::span<const double> x, std::span<double> out) {
  if (x.size() != m.dim() || out.size() != m.dim())
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  for (std::size_t i = 0; i < m.dim(); ++i) out[i] = kernels::dot(m.row(i), x);
}

double quadratic_form(const SymMatrix& m, std::span<const double> x) {
  std::vector<double> mx(m.dim());
  multiply(m, x, mx);
  return kernels::dot(mx, x);
}

SymMatrix lower_gram(const Matrix& lower) {
  const std::size_t n = lower.rows();
  SymMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = lower.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto lj = lower.row(j);
      g.set(i, j, kernels::dot(li.first(j + 1), lj.first(j + 1)));
    }
  }
  return g;
}

SymMatrix lower_gram_transposed(const Matrix& lower) {
  const Matrix u = lower.transposed();
  const std::size_t n = lower.rows();
  SymMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ui = u.row(i);
    for (std::size_t j = i; j < n; ++j) g.set(i, j, kernels::dot(ui.subspan(j), u.row(j).subspan(j)));
  }
  return g;
}

Matrix multiply_lower(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k <= i; ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k).first(k + 1), ci.first(k + 1));
    }
  }
  return c;
}

SymMatrix ar1_precision_analytic(double phi, std::size_t T) {
  if (!(std::abs(phi) < 1.0))
    throw Error(ErrorCode::DomainError, "AR(1) precision requires |phi| < 1");
  if (T == 0) throw Error(ErrorCode::DimensionMismatch, "AR(1) precision requires T >= 1");
  SymMatrix p(T);
  if (T == 1) {
    p.set(0, 0, 1.0 - phi * phi);
    return p;
  }
  for (std::size_t i = 0; i < T; ++i) {
    p.set(i, i, (i == 0 || i + 1 == T) ? 1.0 : 1.0 + phi * phi);
    if (i + 1 < T) p.set(i, i + 1, -phi);
  }
  return p;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "max_abs_diff of different shapes");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace tscore::linalg
