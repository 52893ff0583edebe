#pragma once

#include "nnrank/bounds.hpp"
#include "nnrank/dense_matrix.hpp"

namespace nnrank::gen {

/// The classic 4x4 0/1 matrix whose nonnegative rank (4) exceeds its rank (3).
NonnegMatrix cohen_rothblum();

/// cohen_rothblum() + eps * J (strictly positive for eps > 0).
NonnegMatrix perturbed_cohen_rothblum(double eps);

/// 4x4 0/1 matrix with rectangle covering number 2 but nonnegative rank 3.
NonnegMatrix boolean_rank_example();

/// The planted rank-3 nonnegative factorization of boolean_rank_example().
bounds::NonnegFactorization boolean_rank_example_factorization();

/// Slack matrix of the n-cube with its closed-form optimal certificate.
///
/// Orderings are fixed for reproducibility: facets are
/// (x_1 >= 0, ..., x_n >= 0, x_1 <= 1, ..., x_n <= 1); vertex j in
/// {0, ..., 2^n - 1} has coordinates x_k = bit k-1 of j (binary counting).
/// With these orderings the vertex negation matrix is antidiagonal and the
/// facet negation swaps k <-> n+k.
struct HypercubeCertificate {
  NonnegMatrix slack;            // 2n x 2^n, entries in {0,1}
  DenseMatrix w;                 // gamma * (2*slack - J)
  DenseMatrix nonneg_part;       // blockdiag(negation_facets, negation_vertices)
  DenseMatrix psd_part;          // [[I-N_F, -W], [-W^T, I-N_V]]
  DenseMatrix negation_facets;   // 2n x 2n permutation
  DenseMatrix negation_vertices; // 2^n x 2^n permutation
  double gamma = 0.0;            // 1/sqrt(2^(n-1))
  int n = 0;

  bounds::Certificate to_certificate() const;
};

/// Builds the certificate for 1 <= n <= 12. All integer-exact invariants are
/// checked at construction (column sums, involutions, Wh Wh^T = 2^n (I-N_F),
/// the projection identity for (I-N_V)/2, the range condition and the gamma
/// scaling), which together imply the PSD part is positive semidefinite.
HypercubeCertificate hypercube_slack(int n);

/// J - I: zero diagonal, ones elsewhere (n >= 2).
NonnegMatrix derangement(int n);

/// Proved upper bound on nu+(J - I): 2(n-1) for even n; for odd n the same
/// half-ones test vectors give 2n^2/(n+1). Either way the squared-ratio
/// lower bound on rank+ stays below 4.
double derangement_nu_upper(int n);

struct ScaledDiagonal {
  NonnegMatrix matrix;  // diag(beta, 1, ..., 1)
  SymWeight p;          // diag(eps, 1, ..., 1)
  SymWeight q;
};

/// Ill-conditioned diagonal example together with the weight pair that makes
/// the weighted bound sharp at eps = 1/beta.
ScaledDiagonal scaled_diagonal(int n, double beta, double eps);

}  // namespace nnrank::gen
