#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "nnrank/errors.hpp"
#include "nnrank/kernels.hpp"

// Serial reference implementations. Same arithmetic, same per-element
// accumulation order as the OpenMP kernels, no pragmas; the test suite checks
// bitwise agreement and benchmarks/ measures the speedup.

namespace nnrank::kernels::reference {

void gemm(int m, int n, int k, const double* a, bool ta, const double* b, bool tb, double* c) {
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

namespace {

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
        v[static_cast<size_t>(j) * n + i] = d[j];
      }
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
    for (int j = 0; j < n; ++j) d[j] = v[static_cast<size_t>(j) * n + j];
  }
  e[0] = 0.0;
}

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
            for (int k = 0; k < n; ++k) {
              double* rowk = v + static_cast<size_t>(k) * n;
              const double t = rowk[i + 1];
              rowk[i + 1] = s * rowk[i] + c * t;
              rowk[i] = c * rowk[i] - s * t;
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

}  // namespace nnrank::kernels::reference
