#include "nnrank/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "nnrank/kernels.hpp"

namespace nnrank::spectral {

namespace {

DenseMatrix symmetrized(const DenseMatrix& m, double rel_tol) {
  if (!m.is_square()) throw DimensionError("sym_eig: matrix must be square");
  const int n = m.rows();
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = m(i, j) - m(j, i);
      asym += 2.0 * d * d;
    }
  double scale = frobenius_norm(m);
  if (std::sqrt(asym) > rel_tol * std::max(scale, 1e-300))
    throw ValueError("sym_eig: matrix is not symmetric within tolerance");
  DenseMatrix s(n, n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = m(i, i);
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

// Largest-magnitude component positive; first such component breaks ties.
void fix_column_signs(DenseMatrix& v) {
  const int n = v.rows();
  for (int j = 0; j < v.cols(); ++j) {
    int arg = 0;
    double best = std::fabs(v(0, j));
    for (int i = 1; i < n; ++i) {
      double a = std::fabs(v(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (v(arg, j) < 0.0)
      for (int i = 0; i < n; ++i) v(i, j) = -v(i, j);
  }
}

}  // namespace

DenseMatrix EigenDecomposition::reconstruct() const {
  const int n = vectors.rows();
  DenseMatrix scaled(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scaled(i, j) = vectors(i, j) * values[j];
  DenseMatrix out(n, n);
  kernels::gemm(n, n, n, scaled.data(), false, vectors.data(), true, out.data());
  return out;
}

DenseMatrix SvdResult::reconstruct() const {
  const int m = u.rows();
  const int n = v.rows();
  const int r = static_cast<int>(singular_values.size());
  DenseMatrix us(m, r);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < r; ++j) us(i, j) = u(i, j) * singular_values[j];
  DenseMatrix out(m, n);
  kernels::gemm(m, n, r, us.data(), false, v.data(), true, out.data());
  return out;
}

EigenDecomposition sym_eig(const DenseMatrix& m) {
  DenseMatrix s = symmetrized(m, 1e-9);
  const int n = s.rows();
  EigenDecomposition dec;
  dec.values.resize(n);
  dec.vectors = DenseMatrix(n, n);
  kernels::sym_eig(n, s.data(), dec.values.data(), dec.vectors.data());
  fix_column_signs(dec.vectors);
  return dec;
}

std::vector<double> sym_eigvalues(const DenseMatrix& m) {
  DenseMatrix s = symmetrized(m, 1e-9);
  std::vector<double> values(s.rows());
  kernels::sym_eigvalues(s.rows(), s.data(), values.data());
  return values;
}

double min_eigenvalue(const DenseMatrix& m) { return sym_eigvalues(m).front(); }

SvdResult svd(const DenseMatrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  if (m < n) {
    SvdResult t = svd(a.transposed());
    std::swap(t.u, t.v);
    return t;
  }
  // m >= n: eigendecomposition of A^T A, then u_i = A v_i / ||A v_i||.
  DenseMatrix gram(n, n);
  kernels::gemm(n, n, m, a.data(), true, a.data(), false, gram.data());
  // force exact symmetry (roundoff)
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (gram(i, j) + gram(j, i));
      gram(i, j) = v;
      gram(j, i) = v;
    }
  std::vector<double> evals(n);
  DenseMatrix evecs(n, n);
  kernels::sym_eig(n, gram.data(), evals.data(), evecs.data());

  SvdResult res;
  res.singular_values.resize(n);
  res.v = DenseMatrix(n, n);
  res.u = DenseMatrix(m, n);
  // eigenvalues ascending -> singular values descending
  DenseMatrix av(m, 1);
  double sigma_max = 0.0;
  for (int j = 0; j < n; ++j) {
    const int src = n - 1 - j;
    for (int i = 0; i < n; ++i) res.v(i, j) = evecs(i, src);
    double norm2 = 0.0;
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int t = 0; t < n; ++t) acc += a(i, t) * res.v(t, j);
      av(i, 0) = acc;
      norm2 += acc * acc;
    }
    double sigma = std::sqrt(norm2);
    res.singular_values[j] = sigma;
    sigma_max = std::max(sigma_max, sigma);
    if (sigma > 0.0)
      for (int i = 0; i < m; ++i) res.u(i, j) = av(i, 0) / sigma;
  }
  // Columns whose singular value is negligible get replaced by an orthonormal
  // completion; twice-iterated Gram-Schmidt against canonical basis vectors.
  const double cutoff = 1e-13 * std::max(sigma_max, 1e-300);
  int next_canonical = 0;
  for (int j = 0; j < n; ++j) {
    if (res.singular_values[j] > cutoff) continue;
    res.singular_values[j] = std::max(res.singular_values[j], 0.0);
    bool placed = false;
    while (!placed && next_canonical < m) {
      std::vector<double> cand(m, 0.0);
      cand[next_canonical++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (int t = 0; t < n; ++t) {
          if (t == j || (res.singular_values[t] <= cutoff && t > j)) continue;
          double dot = 0.0;
          for (int i = 0; i < m; ++i) dot += cand[i] * res.u(i, t);
          for (int i = 0; i < m; ++i) cand[i] -= dot * res.u(i, t);
        }
      }
      double norm2 = 0.0;
      for (double x : cand) norm2 += x * x;
      if (norm2 > 0.25) {
        double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < m; ++i) res.u(i, j) = cand[i] * inv;
        placed = true;
      }
    }
    if (!placed) throw Error("svd: failed to complete orthonormal basis");
  }
  // One re-orthonormalization pass over u (descending sigma keeps the
  // dominant directions fixed).
  for (int j = 0; j < n; ++j) {
    for (int t = 0; t < j; ++t) {
      double dot = 0.0;
      for (int i = 0; i < m; ++i) dot += res.u(i, j) * res.u(i, t);
      for (int i = 0; i < m; ++i) res.u(i, j) -= dot * res.u(i, t);
    }
    double norm2 = 0.0;
    for (int i = 0; i < m; ++i) norm2 += res.u(i, j) * res.u(i, j);
    if (norm2 > 0.0) {
      double inv = 1.0 / std::sqrt(norm2);
      for (int i = 0; i < m; ++i) res.u(i, j) *= inv;
    }
  }
  return res;
}

DenseMatrix project_psd(const DenseMatrix& m) {
  DenseMatrix s = symmetrized(m, 1e-9);
  const int n = s.rows();
  std::vector<double> evals(n);
  DenseMatrix evecs(n, n);
  kernels::sym_eig(n, s.data(), evals.data(), evecs.data());
  DenseMatrix scaled(n, n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double lam = std::max(evals[j], 0.0);
    if (lam == 0.0) continue;
    for (int i = 0; i < n; ++i) scaled(i, j) = evecs(i, j) * lam;
  }
  DenseMatrix out(n, n);
  kernels::gemm(n, n, n, scaled.data(), false, evecs.data(), true, out.data());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

DenseMatrix project_nonneg(const DenseMatrix& x) {
  DenseMatrix out(x.rows(), x.cols());
  for (long i = 0; i < x.size(); ++i) out.data()[i] = std::max(x.data()[i], 0.0);
  return out;
}

std::vector<double> project_nonneg(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i], 0.0);
  return out;
}

}  // namespace nnrank::spectral
