#pragma once

#include <vector>

namespace nnrank::kernels {

/// Compressed sparse row matrix. `ptr` has rows+1 entries; column indices
/// within a row are strictly increasing.
struct Csr {
  int rows = 0;
  int cols = 0;
  std::vector<int> ptr;
  std::vector<int> idx;
  std::vector<double> val;
};

struct Triplet {
  int row;
  int col;
  double value;
};

/// Builds a Csr from triplets; duplicates are summed. Deterministic output
/// (entries sorted by row, then column).
Csr csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets);

Csr csr_transpose(const Csr& m);

// --------------------------------------------------------------------------
// OpenMP-parallel kernels. Every kernel partitions output elements across
// threads and keeps the per-element accumulation order fixed, so results are
// bitwise identical to the serial twins in kernels::reference and do not
// depend on the thread count.
// --------------------------------------------------------------------------

/// C(m x n) = op(A) * op(B), op = transpose when the flag is set.
/// A is m x k (or k x m when ta), B is k x n (or n x k when tb). Row-major.
void gemm(int m, int n, int k, const double* a, bool ta, const double* b, bool tb, double* c);

/// y = M x.
void csr_matvec(const Csr& m, const double* x, double* y);

/// In-place lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix (row-major, full storage; the strict upper triangle is ignored and
/// zeroed). Returns false if a pivot is not strictly positive.
bool cholesky(int n, double* a);

/// Solves (L L^T) x = b in place given the factor from cholesky().
void cholesky_solve(int n, const double* l, double* x);

/// Same, with the transposed factor (row-major L^T) supplied so the backward
/// substitution also walks contiguous rows.
void cholesky_solve_t(int n, const double* l, const double* lt, double* x);

/// Symmetric eigendecomposition by Householder tridiagonalization followed by
/// implicit-shift QL. `a` is n x n row-major and is not modified. On return,
/// `values` holds eigenvalues in ascending order and `vectors` (n x n,
/// row-major) holds the corresponding eigenvectors as columns.
void sym_eig(int n, const double* a, double* values, double* vectors);

/// Eigenvalues only (ascending); skips eigenvector accumulation.
void sym_eigvalues(int n, const double* a, double* values);

namespace reference {

// Serial twins, kept for testing and benchmarking against the parallel
// kernels above. Identical arithmetic per output element.

void gemm(int m, int n, int k, const double* a, bool ta, const double* b, bool tb, double* c);
void csr_matvec(const Csr& m, const double* x, double* y);
bool cholesky(int n, double* a);
void sym_eig(int n, const double* a, double* values, double* vectors);
void sym_eigvalues(int n, const double* a, double* values);

}  // namespace reference

}  // namespace nnrank::kernels
