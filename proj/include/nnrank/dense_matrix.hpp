#pragma once

#include <initializer_list>
#include <vector>

#include "nnrank/errors.hpp"

namespace nnrank {

/// Dense real matrix, row-major storage. Entries are validated to be finite
/// at construction; dimensions are fixed for the lifetime of the object.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0);
  DenseMatrix(int rows, int cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long size() const { return static_cast<long>(rows_) * cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const double& operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  DenseMatrix transposed() const;
  bool is_square() const { return rows_ == cols_; }

  /// Throws ValueError if any entry is NaN or infinite.
  void check_finite() const;

  bool operator==(const DenseMatrix& o) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// C = A * B via the kernel layer.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// Frobenius inner product <A,B> = sum_ij A_ij B_ij.
double inner(const DenseMatrix& a, const DenseMatrix& b);

/// sqrt(sum_ij A_ij^2).
double frobenius_norm(const DenseMatrix& a);

double max_abs(const DenseMatrix& a);

/// Entrywise-nonnegative matrix that is not identically zero. Rejects any
/// negative entry at construction (boundary value 0 is accepted).
class NonnegMatrix {
 public:
  explicit NonnegMatrix(DenseMatrix m);

  const DenseMatrix& matrix() const { return m_; }
  int rows() const { return m_.rows(); }
  int cols() const { return m_.cols(); }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  DenseMatrix m_;
};

/// Symmetric nonnegative weight matrix with strictly positive diagonal.
/// Symmetry is required within 1e-12 relative and the stored value is
/// symmetrized so downstream algebra can rely on exact symmetry.
class SymWeight {
 public:
  explicit SymWeight(DenseMatrix m);

  static SymWeight identity(int n) { return SymWeight(DenseMatrix::identity(n)); }

  const DenseMatrix& matrix() const { return m_; }
  int size() const { return m_.rows(); }
  double operator()(int i, int j) const { return m_(i, j); }
  double min_diagonal() const;

 private:
  DenseMatrix m_;
};

/// trace(A^T P A Q); equals ||A||_F^2 when P and Q are identities.
double weighted_gram_trace(const NonnegMatrix& a, const SymWeight& p, const SymWeight& q);

}  // namespace nnrank
