#include "nnrank/dense_matrix.hpp"

#include <cmath>

#include "nnrank/kernels.hpp"

namespace nnrank {

DenseMatrix::DenseMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
  if (rows <= 0 || cols <= 0) throw DimensionError("matrix dimensions must be positive");
  if (!std::isfinite(fill)) throw ValueError("matrix fill value must be finite");
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) throw DimensionError("matrix dimensions must be positive");
  if (data_.size() != static_cast<size_t>(rows) * cols)
    throw DimensionError("entry count does not match rows*cols");
  check_finite();
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  if (rows_ == 0) throw DimensionError("matrix dimensions must be positive");
  cols_ = static_cast<int>(rows.begin()->size());
  if (cols_ == 0) throw DimensionError("matrix dimensions must be positive");
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw DimensionError("ragged initializer rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite();
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_, 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void DenseMatrix::check_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) throw ValueError("matrix entry is not finite");
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix addition: shape mismatch");
  DenseMatrix c(a.rows(), a.cols());
  for (long i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] + b.data()[i];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix subtraction: shape mismatch");
  DenseMatrix c(a.rows(), a.cols());
  for (long i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c(a.rows(), a.cols());
  for (long i = 0; i < a.size(); ++i) c.data()[i] = s * a.data()[i];
  return c;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  kernels::gemm(a.rows(), b.cols(), a.cols(), a.data(), false, b.data(), false, c.data());
  return c;
}

double inner(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("inner product: shape mismatch");
  double s = 0.0;
  for (long i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (long i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
  double s = 0.0;
  for (long i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a.data()[i]));
  return s;
}

NonnegMatrix::NonnegMatrix(DenseMatrix m) : m_(std::move(m)) {
  bool any_positive = false;
  for (long i = 0; i < m_.size(); ++i) {
    double v = m_.data()[i];
    if (v < 0.0) throw ValueError("nonnegative matrix has a negative entry");
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) throw ValueError("nonnegative matrix must not be identically zero");
}

SymWeight::SymWeight(DenseMatrix m) : m_(std::move(m)) {
  if (!m_.is_square()) throw DimensionError("weight matrix must be square");
  double scale = frobenius_norm(m_);
  double asym = 0.0;
  for (int i = 0; i < m_.rows(); ++i)
    for (int j = i + 1; j < m_.cols(); ++j) {
      double d = m_(i, j) - m_(j, i);
      asym += 2.0 * d * d;
    }
  if (std::sqrt(asym) > 1e-12 * scale)
    throw ValueError("weight matrix is not symmetric within 1e-12 relative");
  for (int i = 0; i < m_.rows(); ++i) {
    if (m_(i, i) <= 0.0) throw ValueError("weight matrix needs strictly positive diagonal");
    for (int j = i + 1; j < m_.cols(); ++j) {
      if (m_(i, j) < 0.0 || m_(j, i) < 0.0)
        throw ValueError("weight matrix has a negative entry");
      double v = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
  }
}

double SymWeight::min_diagonal() const {
  double v = m_(0, 0);
  for (int i = 1; i < m_.rows(); ++i) v = std::min(v, m_(i, i));
  return v;
}

double weighted_gram_trace(const NonnegMatrix& a, const SymWeight& p, const SymWeight& q) {
  const DenseMatrix& m = a.matrix();
  if (p.size() != m.rows() || q.size() != m.cols())
    throw DimensionError("weighted_gram_trace: weight dimensions do not match matrix");
  // trace(A^T P A Q) = <P A, A Q>
  DenseMatrix pa = multiply(p.matrix(), m);
  DenseMatrix aq = multiply(m, q.matrix());
  return inner(pa, aq);
}

}  // namespace nnrank
