#pragma once

#include <optional>
#include <utility>

#include "nnrank/dense_matrix.hpp"

namespace nnrank::bounds {

/// Dual witness for the level-0 feasible set: a matrix W together with an
/// explicit split
///     [[P, -W], [-W^T, Q]] = nonneg_part + psd_part
/// where nonneg_part is entrywise >= 0 exactly (clipped at construction) and
/// psd_part is symmetric with lambda_min >= -delta for a small reported
/// delta. P = Q = I unless weights are present.
struct Certificate {
  DenseMatrix w;            // m x n
  DenseMatrix nonneg_part;  // (m+n) x (m+n), symmetric, >= 0
  DenseMatrix psd_part;     // (m+n) x (m+n), symmetric
  std::optional<std::pair<DenseMatrix, DenseMatrix>> weights;  // (P, Q)

  int m() const { return w.rows(); }
  int n() const { return w.cols(); }

  /// The block matrix [[P, -W], [-W^T, Q]] this certificate decomposes.
  DenseMatrix block_matrix() const;

  /// Clips negative entries of nonneg_part to zero and symmetrizes both
  /// parts; called by every builder so the type invariant holds exactly.
  void normalize();

  void check_shapes() const;
};

}  // namespace nnrank::bounds
