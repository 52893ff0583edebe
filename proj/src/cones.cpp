#include "nnrank/cones.hpp"

#include <algorithm>
#include <cmath>

#include "nnrank/spectral.hpp"

namespace nnrank::conic {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

int ConeProduct::length() const {
  int total = 0;
  for (const ConeBlock& b : blocks) total += b.length();
  return total;
}

void ConeProduct::validate() const {
  for (const ConeBlock& b : blocks)
    if (b.dim <= 0) throw DimensionError("cone block dimension must be positive");
}

void ConeProduct::project(std::span<double> z) const {
  size_t off = 0;
  for (const ConeBlock& b : blocks) {
    const size_t len = static_cast<size_t>(b.length());
    switch (b.type) {
      case ConeType::Zero:
        std::fill(z.begin() + off, z.begin() + off + len, 0.0);
        break;
      case ConeType::Free:
        break;
      case ConeType::NonNeg:
        for (size_t i = off; i < off + len; ++i) z[i] = std::max(z[i], 0.0);
        break;
      case ConeType::Psd: {
        DenseMatrix x = smat(b.dim, z.data() + off);
        DenseMatrix p = spectral::project_psd(x);
        svec(p, z.data() + off);
        break;
      }
    }
    off += len;
  }
}

int svec_length(int side) { return side * (side + 1) / 2; }

int svec_index(int side, int i, int j) {
  // row-major upper triangle: row i starts at i*side - i(i-1)/2
  return i * side - i * (i - 1) / 2 + (j - i);
}

void svec(const DenseMatrix& x, double* out) {
  const int n = x.rows();
  int a = 0;
  for (int i = 0; i < n; ++i) {
    out[a++] = x(i, i);
    for (int j = i + 1; j < n; ++j) out[a++] = kSqrt2 * x(i, j);
  }
}

DenseMatrix smat(int side, const double* v) {
  DenseMatrix x(side, side);
  int a = 0;
  for (int i = 0; i < side; ++i) {
    x(i, i) = v[a++];
    for (int j = i + 1; j < side; ++j) {
      double w = v[a++] / kSqrt2;
      x(i, j) = w;
      x(j, i) = w;
    }
  }
  return x;
}

}  // namespace nnrank::conic
