#include "nnrank/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "nnrank/errors.hpp"

namespace nnrank::kernels {

namespace {
// Below these sizes the OpenMP fork/join overhead exceeds the loop body.
constexpr long kGemmParallelFlops = 32768;
constexpr int kDimParallelCutoff = 128;
constexpr int kRowsParallelCutoff = 1024;
}  // namespace

Csr csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  Csr m;
  m.rows = rows;
  m.cols = cols;
  m.ptr.assign(rows + 1, 0);
  m.idx.reserve(triplets.size());
  m.val.reserve(triplets.size());
  int last_row = -1;
  int last_col = -1;
  for (const Triplet& tr : triplets) {
    if (tr.row < 0 || tr.row >= rows || tr.col < 0 || tr.col >= cols)
      throw DimensionError("triplet index out of range");
    if (tr.row == last_row && tr.col == last_col) {
      m.val.back() += tr.value;  // duplicate entry
    } else {
      m.idx.push_back(tr.col);
      m.val.push_back(tr.value);
      last_row = tr.row;
      last_col = tr.col;
    }
    m.ptr[tr.row + 1] = static_cast<int>(m.idx.size());
  }
  // forward-fill row pointers for empty rows
  for (int r = 0; r < rows; ++r) m.ptr[r + 1] = std::max(m.ptr[r + 1], m.ptr[r]);
  return m;
}

Csr csr_transpose(const Csr& m) {
  Csr t;
  t.rows = m.cols;
  t.cols = m.rows;
  t.ptr.assign(m.cols + 1, 0);
  t.idx.resize(m.idx.size());
  t.val.resize(m.val.size());
  for (int c : m.idx) ++t.ptr[c + 1];
  for (int c = 0; c < m.cols; ++c) t.ptr[c + 1] += t.ptr[c];
  std::vector<int> fill(t.ptr.begin(), t.ptr.end() - 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int p = m.ptr[r]; p < m.ptr[r + 1]; ++p) {
      int c = m.idx[p];
      t.idx[fill[c]] = r;
      t.val[fill[c]] = m.val[p];
      ++fill[c];
    }
  }
  return t;
}

void gemm(int m, int n, int k, const double* a, bool ta, const double* b, bool tb, double* c) {
  const long flops = static_cast<long>(m) * n * k;
#pragma omp parallel for if (flops >= kGemmParallelFlops) schedule(static)
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int t = 0; t < k; ++t) {
        const double av = ta ? a[static_cast<size_t>(t) * m + i] : a[static_cast<size_t>(i) * k + t];
        const double bv = tb ? b[static_cast<size_t>(j) * k + t] : b[static_cast<size_t>(t) * n + j];
        acc += av * bv;
      }
      c[static_cast<size_t>(i) * n + j] = acc;
    }
  }
}

void csr_matvec(const Csr& m, const double* x, double* y) {
#pragma omp parallel for if (m.rows >= kRowsParallelCutoff) schedule(static)
  for (int r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    for (int p = m.ptr[r]; p < m.ptr[r + 1]; ++p) acc += m.val[p] * x[m.idx[p]];
    y[r] = acc;
  }
}

bool cholesky(int n, double* a) {
  for (int j = 0; j < n; ++j) {
    const double d = a[static_cast<size_t>(j) * n + j];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a[static_cast<size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) a[static_cast<size_t>(i) * n + j] /= ljj;
#pragma omp parallel for if (n - j >= kDimParallelCutoff) schedule(static)
    for (int i = j + 1; i < n; ++i) {
      const double lij = a[static_cast<size_t>(i) * n + j];
      double* rowi = a + static_cast<size_t>(i) * n;
      for (int t = j + 1; t <= i; ++t) rowi[t] -= lij * a[static_cast<size_t>(t) * n + j];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a[static_cast<size_t>(i) * n + j] = 0.0;
  return true;
}

void cholesky_solve(int n, const double* l, double* x) {
  for (int i = 0; i < n; ++i) {
    double acc = x[i];
    const double* rowi = l + static_cast<size_t>(i) * n;
    for (int t = 0; t < i; ++t) acc -= rowi[t] * x[t];
    x[i] = acc / rowi[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    for (int t = i + 1; t < n; ++t) acc -= l[static_cast<size_t>(t) * n + i] * x[t];
    x[i] = acc / l[static_cast<size_t>(i) * n + i];
  }
}

void cholesky_solve_t(int n, const double* l, const double* lt, double* x) {
  for (int i = 0; i < n; ++i) {
    double acc = x[i];
    const double* rowi = l + static_cast<size_t>(i) * n;
    for (int t = 0; t < i; ++t) acc -= rowi[t] * x[t];
    x[i] = acc / rowi[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    const double* rowi = lt + static_cast<size_t>(i) * n;
    for (int t = i + 1; t < n; ++t) acc -= rowi[t] * x[t];
    x[i] = acc / rowi[i];
  }
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form. v is n x n
// row-major; on entry it holds the matrix, on exit the accumulated orthogonal
// factor (when with_vectors) or scratch. d receives the diagonal, e the
// subdiagonal in e[1..n-1].
void tridiagonalize(int n, double* v, double* d, double* e, bool with_vectors) {
  for (int j = 0; j < n; ++j) d[j] = v[static_cast<size_t>(n - 1) * n + j];

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::fabs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v[static_cast<size_t>(i - 1) * n + j];
        v[static_cast<size_t>(i) * n + j] = 0.0;
        v[static_cast<size_t>(j) * n + i] = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0.0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) {
        e[j] = 0.0;
        v[static_cast<size_t>(j) * n + i] = d[j];  // saved Householder vector
      }
      // e[0..i-1] = T d where T is the leading i x i block (lower triangle).
#pragma omp parallel for if (i >= kDimParallelCutoff) schedule(static)
      for (int j = 0; j < i; ++j) {
        double acc = 0.0;
        const double* rowj = v + static_cast<size_t>(j) * n;
        for (int k = 0; k <= j; ++k) acc += rowj[k] * d[k];
        for (int k = j + 1; k < i; ++k) acc += v[static_cast<size_t>(k) * n + j] * d[k];
        e[j] = acc;
      }
      double fsum = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        fsum += e[j] * d[j];
      }
      const double hh = fsum / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      // Rank-2 update of the leading block, column by column.
#pragma omp parallel for if (i >= kDimParallelCutoff) schedule(static)
      for (int j = 0; j < i; ++j) {
        const double fj = d[j];
        const double gj = e[j];
        for (int k = j; k < i; ++k)
          v[static_cast<size_t>(k) * n + j] -= fj * e[k] + gj * d[k];
      }
      for (int j = 0; j < i; ++j) {
        d[j] = v[static_cast<size_t>(i - 1) * n + j];
        v[static_cast<size_t>(i) * n + j] = 0.0;
      }
    }
    d[i] = h;
  }

  if (with_vectors) {
    for (int i = 0; i < n - 1; ++i) {
      v[static_cast<size_t>(n - 1) * n + i] = v[static_cast<size_t>(i) * n + i];
      v[static_cast<size_t>(i) * n + i] = 1.0;
      const double h = d[i + 1];
      if (h != 0.0) {
        for (int k = 0; k <= i; ++k) d[k] = v[static_cast<size_t>(k) * n + i + 1] / h;
#pragma omp parallel for if (i >= kDimParallelCutoff) schedule(static)
        for (int j = 0; j <= i; ++j) {
          double g = 0.0;
          for (int k = 0; k <= i; ++k)
            g += v[static_cast<size_t>(k) * n + i + 1] * v[static_cast<size_t>(k) * n + j];
          for (int k = 0; k <= i; ++k) v[static_cast<size_t>(k) * n + j] -= g * d[k];
        }
      }
      for (int k = 0; k <= i; ++k) v[static_cast<size_t>(k) * n + i + 1] = 0.0;
    }
    for (int j = 0; j < n; ++j) {
      d[j] = v[static_cast<size_t>(n - 1) * n + j];
      v[static_cast<size_t>(n - 1) * n + j] = 0.0;
    }
    v[static_cast<size_t>(n - 1) * n + n - 1] = 1.0;
  } else {
    // The reduced diagonal lives on v's diagonal; d currently holds the
    // Householder h values.
    for (int j = 0; j < n; ++j) d[j] = v[static_cast<size_t>(j) * n + j];
  }
  e[0] = 0.0;
}

// Implicit-shift QL iteration on the tridiagonal (d, e). When v is non-null
// the rotations are accumulated into its columns.
void ql_implicit(int n, double* d, double* e, double* v) {
  constexpr double eps = 2.220446049250313e-16;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
    int m = l;
    while (m < n) {
      if (std::fabs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 80) throw Error("symmetric eigensolver failed to converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0.0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (v != nullptr) {
            // manual branch: an OpenMP region per rotation is pure overhead
            // below the cutoff
            if (n >= 2 * kDimParallelCutoff) {
#pragma omp parallel for schedule(static)
              for (int k = 0; k < n; ++k) {
                double* rowk = v + static_cast<size_t>(k) * n;
                const double t = rowk[i + 1];
                rowk[i + 1] = s * rowk[i] + c * t;
                rowk[i] = c * rowk[i] - s * t;
              }
            } else {
              for (int k = 0; k < n; ++k) {
                double* rowk = v + static_cast<size_t>(k) * n;
                const double t = rowk[i + 1];
                rowk[i + 1] = s * rowk[i] + c * t;
                rowk[i] = c * rowk[i] - s * t;
              }
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::fabs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void sort_ascending(int n, double* d, double* v) {
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    for (int j = i + 1; j < n; ++j)
      if (d[j] < d[k]) k = j;
    if (k != i) {
      std::swap(d[i], d[k]);
      if (v != nullptr)
        for (int r = 0; r < n; ++r)
          std::swap(v[static_cast<size_t>(r) * n + i], v[static_cast<size_t>(r) * n + k]);
    }
  }
}

}  // namespace

void sym_eig(int n, const double* a, double* values, double* vectors) {
  std::memcpy(vectors, a, sizeof(double) * static_cast<size_t>(n) * n);
  std::vector<double> e(n, 0.0);
  tridiagonalize(n, vectors, values, e.data(), true);
  ql_implicit(n, values, e.data(), vectors);
  sort_ascending(n, values, vectors);
}

void sym_eigvalues(int n, const double* a, double* values) {
  std::vector<double> work(a, a + static_cast<size_t>(n) * n);
  std::vector<double> e(n, 0.0);
  tridiagonalize(n, work.data(), values, e.data(), false);
  ql_implicit(n, values, e.data(), nullptr);
  sort_ascending(n, values, nullptr);
}

}  // namespace nnrank::kernels
