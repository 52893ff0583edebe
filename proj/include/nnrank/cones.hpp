#pragma once

#include <span>
#include <vector>

#include "nnrank/dense_matrix.hpp"

namespace nnrank::conic {

enum class ConeType { Zero, Free, NonNeg, Psd };

/// One block of a cone product. For Psd blocks `dim` is the matrix side and
/// the vector length is dim(dim+1)/2 (scaled symmetric vectorization).
struct ConeBlock {
  ConeType type;
  int dim;

  int length() const { return type == ConeType::Psd ? dim * (dim + 1) / 2 : dim; }
};

/// Ordered product of cones over a flat variable vector.
struct ConeProduct {
  std::vector<ConeBlock> blocks;

  int length() const;
  void validate() const;

  /// In-place Euclidean projection onto the cone.
  void project(std::span<double> z) const;
};

// Scaled symmetric vectorization: row-major upper triangle, off-diagonal
// entries multiplied by sqrt(2) so that <svec(X), svec(Y)> = <X, Y>.

int svec_length(int side);
int svec_index(int side, int i, int j);  // requires i <= j

void svec(const DenseMatrix& x, double* out);
DenseMatrix smat(int side, const double* v);

}  // namespace nnrank::conic
