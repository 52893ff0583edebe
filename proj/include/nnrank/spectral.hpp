#pragma once

#include <vector>

#include "nnrank/dense_matrix.hpp"

namespace nnrank::spectral {

/// Eigendecomposition of a symmetric matrix: values ascending, eigenvectors
/// as the columns of an orthonormal matrix. Reconstruction V diag(l) V^T
/// matches the input within 1e-10 * ||input||_F.
struct EigenDecomposition {
  std::vector<double> values;
  DenseMatrix vectors;

  DenseMatrix reconstruct() const;
};

/// Thin SVD: singular values descending, u (m x r) and v (n x r) with
/// orthonormal columns, r = min(m, n).
struct SvdResult {
  std::vector<double> singular_values;
  DenseMatrix u;
  DenseMatrix v;

  DenseMatrix reconstruct() const;
};

/// Symmetric eigendecomposition. The input must be symmetric within
/// 1e-9 * ||M||_F and is symmetrized as (M + M^T)/2 before factorization.
/// Eigenvector signs are fixed so the largest-magnitude component of each
/// vector is positive (first such component on ties).
EigenDecomposition sym_eig(const DenseMatrix& m);

/// Eigenvalues only (ascending); skips eigenvector accumulation, which makes
/// large feasibility checks considerably cheaper.
std::vector<double> sym_eigvalues(const DenseMatrix& m);

double min_eigenvalue(const DenseMatrix& m);

/// SVD via eigendecomposition of the Gram matrix of the thin side.
SvdResult svd(const DenseMatrix& a);

/// Euclidean projection onto the positive semidefinite cone:
/// V diag(max(l,0)) V^T.
DenseMatrix project_psd(const DenseMatrix& m);

/// Entrywise max(x, 0).
DenseMatrix project_nonneg(const DenseMatrix& x);
std::vector<double> project_nonneg(const std::vector<double>& x);

}  // namespace nnrank::spectral
