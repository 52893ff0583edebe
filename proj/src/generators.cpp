#include "nnrank/generators.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace nnrank::gen {

NonnegMatrix cohen_rothblum() {
  return NonnegMatrix(DenseMatrix{{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}});
}

NonnegMatrix perturbed_cohen_rothblum(double eps) {
  if (eps < 0.0) throw ValueError("perturbation eps must be >= 0");
  DenseMatrix a = cohen_rothblum().matrix();
  for (long i = 0; i < a.size(); ++i) a.data()[i] += eps;
  return NonnegMatrix(std::move(a));
}

NonnegMatrix boolean_rank_example() {
  return NonnegMatrix(DenseMatrix{{0, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}});
}

bounds::NonnegFactorization boolean_rank_example_factorization() {
  // A = U V with U columns / V rows normalized to unit length.
  const std::vector<std::vector<double>> ucols = {
      {1, 1, 0, 0}, {1, 1, 1, 1}, {0, 1, 1, 1}};
  const std::vector<std::vector<double>> vrows = {
      {0, 0, 1, 1}, {0, 1, 0, 0}, {1, 0, 0, 0}};
  bounds::NonnegFactorization fact;
  for (int t = 0; t < 3; ++t) {
    double nu = 0.0, nv = 0.0;
    for (double x : ucols[t]) nu += x * x;
    for (double x : vrows[t]) nv += x * x;
    nu = std::sqrt(nu);
    nv = std::sqrt(nv);
    std::vector<double> u = ucols[t], v = vrows[t];
    for (double& x : u) x /= nu;
    for (double& x : v) x /= nv;
    fact.lambdas.push_back(nu * nv);
    fact.us.push_back(std::move(u));
    fact.vs.push_back(std::move(v));
  }
  fact.validate();
  return fact;
}

namespace {

// integer matrix product helper for the exact certificate identities
std::vector<int64_t> imul(const std::vector<int64_t>& a, int ar, int ac,
                          const std::vector<int64_t>& b, int bc, bool b_transposed) {
  std::vector<int64_t> c(static_cast<size_t>(ar) * bc, 0);
  for (int i = 0; i < ar; ++i)
    for (int j = 0; j < bc; ++j) {
      int64_t acc = 0;
      for (int t = 0; t < ac; ++t)
        acc += a[static_cast<size_t>(i) * ac + t] *
               (b_transposed ? b[static_cast<size_t>(j) * ac + t]
                             : b[static_cast<size_t>(t) * bc + j]);
      c[static_cast<size_t>(i) * bc + j] = acc;
    }
  return c;
}

}  // namespace

HypercubeCertificate hypercubeslack_impl(int n) {
  const int f = 2 * n;       // facet count
  const int64_t v64 = int64_t(1) << n;
  const int v = static_cast<int>(v64);  // vertex count

  // slack entries: facet k (x_k >= 0) has slack x_k = bit k-1 of the vertex;
  // facet n+k (x_k <= 1) has slack 1 - x_k
  std::vector<int64_t> s(static_cast<size_t>(f) * v);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < v; ++j) {
      const int64_t bit = (j >> k) & 1;
      s[static_cast<size_t>(k) * v + j] = bit;
      s[static_cast<size_t>(n + k) * v + j] = 1 - bit;
    }

  // exact invariants -------------------------------------------------------
  for (int j = 0; j < v; ++j) {
    int64_t ones = 0;
    for (int i = 0; i < f; ++i) ones += s[static_cast<size_t>(i) * v + j];
    if (ones != n) throw Error("hypercube slack: column does not have n ones");
  }

  std::vector<int64_t> wh(static_cast<size_t>(f) * v);
  for (size_t i = 0; i < wh.size(); ++i) wh[i] = 2 * s[i] - 1;

  // negation maps: facet k <-> n+k, vertex j <-> complement of j
  std::vector<int64_t> nf(static_cast<size_t>(f) * f, 0);
  for (int k = 0; k < n; ++k) {
    nf[static_cast<size_t>(k) * f + (n + k)] = 1;
    nf[static_cast<size_t>(n + k) * f + k] = 1;
  }
  std::vector<int64_t> nv(static_cast<size_t>(v) * v, 0);
  for (int j = 0; j < v; ++j) nv[static_cast<size_t>(j) * v + (v - 1 - j)] = 1;

  // Wh Wh^T = 2^n (I - N_F)
  {
    std::vector<int64_t> g = imul(wh, f, v, wh, f, true);
    for (int i = 0; i < f; ++i)
      for (int j = 0; j < f; ++j) {
        const int64_t expected = v64 * ((i == j ? 1 : 0) - nf[static_cast<size_t>(i) * f + j]);
        if (g[static_cast<size_t>(i) * f + j] != expected)
          throw Error("hypercube slack: Wh Wh^T identity failed");
      }
  }
  // N_V is a fixed-point-free symmetric involution: each row has a single 1
  // at the complemented index. That gives N_V^2 = I exactly, hence
  // (I - N_V)^2 = 2 (I - N_V): (I - N_V)/2 is an orthogonal projection.
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j) {
      const int64_t expected = (j == v - 1 - i) ? 1 : 0;
      if (nv[static_cast<size_t>(i) * v + j] != expected)
        throw Error("hypercube slack: vertex negation is not the complement involution");
    }
  // range condition: Wh N_V = -Wh (columns pair up with opposite sign)
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < v; ++j)
      if (wh[static_cast<size_t>(i) * v + j] != -wh[static_cast<size_t>(i) * v + (v - 1 - j)])
        throw Error("hypercube slack: negation antisymmetry failed");
  // involutions are immediate from the constructions above; gamma condition:
  const double gamma = 1.0 / std::sqrt(std::pow(2.0, n - 1));
  if (gamma * gamma * std::pow(2.0, n - 1) > 1.0 + 1e-12)
    throw Error("hypercube slack: gamma scaling failed");

  // assemble the dense certificate ----------------------------------------
  DenseMatrix slack(f, v);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < v; ++j) slack(i, j) = static_cast<double>(s[static_cast<size_t>(i) * v + j]);

  HypercubeCertificate cert{NonnegMatrix(slack),
                            DenseMatrix(f, v),
                            DenseMatrix(f + v, f + v, 0.0),
                            DenseMatrix(f + v, f + v, 0.0),
                            DenseMatrix(f, f, 0.0),
                            DenseMatrix(v, v, 0.0),
                            gamma,
                            n};

  for (int i = 0; i < f; ++i)
    for (int j = 0; j < v; ++j)
      cert.w(i, j) = gamma * static_cast<double>(wh[static_cast<size_t>(i) * v + j]);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j)
      cert.negation_facets(i, j) = static_cast<double>(nf[static_cast<size_t>(i) * f + j]);
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j)
      cert.negation_vertices(i, j) = static_cast<double>(nv[static_cast<size_t>(i) * v + j]);

  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) {
      cert.nonneg_part(i, j) = cert.negation_facets(i, j);
      cert.psd_part(i, j) = (i == j ? 1.0 : 0.0) - cert.negation_facets(i, j);
    }
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j) {
      cert.nonneg_part(f + i, f + j) = cert.negation_vertices(i, j);
      cert.psd_part(f + i, f + j) = (i == j ? 1.0 : 0.0) - cert.negation_vertices(i, j);
    }
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < v; ++j) {
      cert.psd_part(i, f + j) = -cert.w(i, j);
      cert.psd_part(f + j, i) = -cert.w(i, j);
    }
  return cert;
}

HypercubeCertificate hypercube_slack(int n) {
  if (n < 1 || n > 12) throw ValueError("hypercube_slack: n must be in 1..12");
  return hypercubeslack_impl(n);
}

bounds::Certificate HypercubeCertificate::to_certificate() const {
  bounds::Certificate c;
  c.w = w;
  c.nonneg_part = nonneg_part;
  c.psd_part = psd_part;
  c.normalize();
  return c;
}

NonnegMatrix derangement(int n) {
  if (n < 2) throw ValueError("derangement: n must be >= 2");
  DenseMatrix d(n, n, 1.0);
  for (int i = 0; i < n; ++i) d(i, i) = 0.0;
  return NonnegMatrix(std::move(d));
}

double derangement_nu_upper(int n) {
  if (n < 2) throw ValueError("derangement_nu_upper: n must be >= 2");
  if (n % 2 == 0) return 2.0 * (n - 1);
  // odd n: disjoint half-ones vectors of sizes (n+1)/2 and (n-1)/2 force
  // b <= 2n/(n^2-1), so nu+ <= (n^2-n) * 2n/(n^2-1) = 2n^2/(n+1)
  return 2.0 * n * n / (n + 1.0);
}

ScaledDiagonal scaled_diagonal(int n, double beta, double eps) {
  if (n < 1) throw ValueError("scaled_diagonal: n must be >= 1");
  if (beta <= 0.0 || eps <= 0.0) throw ValueError("scaled_diagonal: beta and eps must be > 0");
  DenseMatrix a = DenseMatrix::identity(n);
  a(0, 0) = beta;
  DenseMatrix p = DenseMatrix::identity(n);
  p(0, 0) = eps;
  return ScaledDiagonal{NonnegMatrix(std::move(a)), SymWeight(p), SymWeight(p)};
}

}  // namespace nnrank::gen
