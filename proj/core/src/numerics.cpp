#include "wsn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/errors.hpp"

namespace wsn {

Matrix::Matrix(std::size_t order, double fill) : order_(order), entries_(order * order, fill) {
  if (order == 0) throw InvalidArgument("matrix order must be >= 1");
}

Matrix::Matrix(std::size_t order, std::vector<double> entries)
    : order_(order), entries_(std::move(entries)) {
  if (order == 0) throw InvalidArgument("matrix order must be >= 1");
  if (entries_.size() != order * order) {
    throw DimensionMismatch("matrix of order " + std::to_string(order) + " needs " +
                            std::to_string(order * order) + " entries, got " +
                            std::to_string(entries_.size()));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : order_(rows.size()) {
  if (order_ == 0) throw InvalidArgument("matrix order must be >= 1");
  entries_.reserve(order_ * order_);
  for (const auto& r : rows) {
    if (r.size() != order_) throw DimensionMismatch("matrix rows must be square");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t order) {
  Matrix m(order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

RealVector Matrix::multiply(std::span<const double> x) const {
  if (x.size() != order_) throw DimensionMismatch("matrix-vector size mismatch");
  RealVector y(order_, 0.0);
  for (std::size_t i = 0; i < order_; ++i) y[i] = dot(row(i), x);
  return y;
}

Matrix Matrix::transpose() const {
  Matrix t(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::multiply(const Matrix& other) const {
  if (other.order_ != order_) throw DimensionMismatch("matrix-matrix size mismatch");
  Matrix c(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t k = 0; k < order_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < order_; ++j) c(i, j) += a * other(k, j);
    }
  return c;
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  double scale = 0.0;
  for (double v : m.entries()) scale = std::max(scale, std::abs(v));
  const double tol = rel_tol * std::max(scale, 1e-300);
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t j = i + 1; j < m.order(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  if (!is_symmetric(m_)) throw InvalidArgument("matrix is not symmetric");
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(Matrix(rows)) {}

SymMatrix SymMatrix::identity(std::size_t order) { return SymMatrix(Matrix::identity(order)); }

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  return SymMatrix(Matrix::diagonal(diag));
}

SymMatrix SymMatrix::principal(std::span<const std::size_t> idx) const {
  Matrix sub(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if (idx[a] >= order() || idx[b] >= order()) throw DimensionMismatch("index out of range");
      sub(a, b) = m_(idx[a], idx[b]);
    }
  return SymMatrix(std::move(sub));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Matrix cholesky_factor(const SymMatrix& a) {
  const std::size_t n = a.order();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double floor = 1e-12 * max_diag;

  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > floor)) {
      throw NotPositiveDefinite("pivot " + std::to_string(j) + " is " + std::to_string(pivot) +
                                " (floor " + std::to_string(floor) + ")");
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

RealVector cholesky_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.order();
  if (b.size() != n) throw DimensionMismatch("right-hand side size mismatch");
  RealVector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= lower(k, ii) * y[k];
    y[ii] /= lower(ii, ii);
  }
  return y;
}

RealVector solve_spd(const SymMatrix& a, std::span<const double> b) {
  if (b.size() != a.order()) throw DimensionMismatch("right-hand side size mismatch");
  return cholesky_solve(cholesky_factor(a), b);
}

double max_eigenvalue(const SymMatrix& a, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("eigenvalue tolerance must be positive");
  const std::size_t n = a.order();
  RealVector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    RealVector y = a.multiply(x);
    const double next = dot(x, y);
    const double ynorm = norm(y);
    if (ynorm == 0.0) return 0.0;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return next;
    lambda = next;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ynorm;
  }
  throw NoConvergence("power iteration did not converge in " + std::to_string(max_iter) +
                      " iterations");
}

}  // namespace wsn
