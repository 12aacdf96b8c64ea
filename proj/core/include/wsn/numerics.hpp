#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace wsn {

using RealVector = std::vector<double>;

/// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t order, double fill = 0.0);
  Matrix(std::size_t order, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t order);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t order() const noexcept { return order_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * order_ + j]; }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(entries_).subspan(i * order_, order_);
  }

  RealVector multiply(std::span<const double> x) const;
  Matrix transpose() const;
  Matrix multiply(const Matrix& other) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t order_ = 0;
  std::vector<double> entries_;
};

/// A square matrix whose symmetry (1e-12 relative) was checked on construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Matrix m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t order);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t order() const noexcept { return m_.order(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  RealVector multiply(std::span<const double> x) const { return m_.multiply(x); }

  /// Principal submatrix on the given index set (in the given order).
  SymMatrix principal(std::span<const std::size_t> idx) const;

  bool operator==(const SymMatrix&) const = default;

 private:
  Matrix m_;
};

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Lower-triangular L with L·Lᵀ = a. Throws NotPositiveDefinite when a pivot
/// is at most 1e-12 × max diagonal. Entries above the diagonal are exactly 0.
Matrix cholesky_factor(const SymMatrix& a);

/// Solves L·Lᵀ x = b given the Cholesky factor.
RealVector cholesky_solve(const Matrix& lower, std::span<const double> b);

RealVector solve_spd(const SymMatrix& a, std::span<const double> b);

inline constexpr double kEigenTolerance = 1e-8;
inline constexpr int kEigenMaxIter = 10'000;

/// Dominant eigenvalue of a symmetric PSD matrix by power iteration from the
/// all-ones vector. Converged when the Rayleigh quotient moves by at most
/// tol·|λ| between sweeps; throws NoConvergence otherwise.
double max_eigenvalue(const SymMatrix& a, double tol = kEigenTolerance,
                      int max_iter = kEigenMaxIter);

}  // namespace wsn
