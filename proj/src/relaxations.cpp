#include "nnrank/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace nnrank::relax {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kSqrt2 = std::sqrt(2.0);

using kernels::Triplet;

std::pair<DenseMatrix, DenseMatrix> weight_matrices(
    const NonnegMatrix& a, const std::optional<std::pair<SymWeight, SymWeight>>& weights) {
  if (weights) {
    if (weights->first.size() != a.rows() || weights->second.size() != a.cols())
      throw DimensionError("relaxation weights do not match matrix dimensions");
    return {weights->first.matrix(), weights->second.matrix()};
  }
  return {DenseMatrix::identity(a.rows()), DenseMatrix::identity(a.cols())};
}

bool nearly_symmetric(const DenseMatrix& a, double rel_tol) {
  if (!a.is_square()) return false;
  double asym = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      double d = a(i, j) - a(j, i);
      asym += 2.0 * d * d;
    }
  return std::sqrt(asym) <= rel_tol * std::max(frobenius_norm(a), 1e-300);
}

// exponent vectors of total degree `deg` over `v` variables, lexicographic
// descending; deterministic basis and row order for the SOS compilation
void enumerate_monomials(int v, int deg, std::vector<int>& prefix,
                         std::vector<std::vector<int>>& out) {
  if (v == 1) {
    prefix.push_back(deg);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = deg; e >= 0; --e) {
    prefix.push_back(e);
    enumerate_monomials(v - 1, deg - e, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<int>> monomials(int v, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  enumerate_monomials(v, deg, prefix, out);
  return out;
}

// k! / prod(delta_i!) for |delta| = k; exact in 64-bit integers for the small
// orders used here
double multinomial(int k, const std::vector<int>& delta) {
  unsigned long long num = 1;
  int consumed = 0;
  for (int d : delta) {
    for (int t = 1; t <= d; ++t) {
      num = num * static_cast<unsigned long long>(consumed + t) / static_cast<unsigned long long>(t);
    }
    consumed += d;
  }
  (void)k;
  return static_cast<double>(num);
}

}  // namespace

long gram_dimension(int nvars, int k) {
  // C(nvars + k + 1, k + 2), computed without overflow for sane inputs
  long num = 1;
  for (int t = 1; t <= k + 2; ++t) num = num * (nvars + k + 2 - t) / t;
  return num;
}

double Relaxation::value(const conic::ConicSolution& sol) const {
  return objective_sign * sol.primal_objective;
}

Relaxation build_level0(const NonnegMatrix& a,
                        const std::optional<std::pair<SymWeight, SymWeight>>& weights) {
  const int m = a.rows();
  const int n = a.cols();
  const int d = m + n;
  auto [p, q] = weight_matrices(a, weights);

  Relaxation rel;
  rel.form = RelaxationForm::Level0Full;
  rel.m = m;
  rel.n = n;
  rel.level = 0;
  if (weights) rel.weights = std::make_pair(p, q);
  rel.objective_sign = -1.0;

  const int nw = m * n;
  const int t = conic::svec_length(d);
  rel.var_w = 0;
  rel.var_nonneg = nw;
  rel.var_psd = nw + t;

  conic::ConicProblem& cp = rel.problem;
  cp.cone.blocks = {{conic::ConeType::Free, nw},
                    {conic::ConeType::NonNeg, t},
                    {conic::ConeType::Psd, d}};
  cp.c.assign(nw + 2 * t, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) cp.c[static_cast<size_t>(i) * n + j] = -a(i, j);

  // rows: P-block upper triangle, Q-block upper triangle, then the
  // off-diagonal block in row-major entry order
  rel.rows_p = 0;
  rel.rows_q = m * (m + 1) / 2;
  rel.rows_cross = rel.rows_q + n * (n + 1) / 2;

  std::vector<Triplet> trip;
  cp.b.assign(t, 0.0);
  int row = 0;
  auto entry_row = [&](int i, int j, double rhs, int w_index) {
    const int sv = conic::svec_index(d, i, j);
    const double coef = (i == j) ? 1.0 : kInvSqrt2;
    trip.push_back({row, rel.var_nonneg + sv, coef});
    trip.push_back({row, rel.var_psd + sv, coef});
    if (w_index >= 0) trip.push_back({row, rel.var_w + w_index, 1.0});
    cp.b[row] = rhs;
    ++row;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) entry_row(i, j, p(i, j), -1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) entry_row(m + i, m + j, q(i, j), -1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) entry_row(i, m + j, 0.0, i * n + j);

  cp.constraints = kernels::csr_from_triplets(t, nw + 2 * t, std::move(trip));
  return rel;
}

Relaxation build_symmetric_reduced(
    const NonnegMatrix& a, const std::optional<std::pair<SymWeight, SymWeight>>& weights) {
  const DenseMatrix& am = a.matrix();
  if (!am.is_square() || !nearly_symmetric(am, 1e-10))
    throw ValueError("symmetric reduction requires a symmetric matrix");
  const int n = a.rows();
  auto [p, q] = weight_matrices(a, weights);
  if (weights && frobenius_norm(p - q) > 1e-12 * std::max(frobenius_norm(p), 1.0))
    throw ValueError("symmetric reduction with weights requires P == Q");

  Relaxation rel;
  rel.form = RelaxationForm::Level0Reduced;
  rel.m = n;
  rel.n = n;
  rel.level = 0;
  if (weights) rel.weights = std::make_pair(p, p);
  rel.objective_sign = 1.0;

  const int t = conic::svec_length(n);
  rel.var_psd = 0;       // X - A
  rel.var_psd2 = t;      // X + A
  rel.var_nonneg = 2 * t;  // X
  rel.rows_r2 = t;

  conic::ConicProblem& cp = rel.problem;
  cp.cone.blocks = {{conic::ConeType::Psd, n},
                    {conic::ConeType::Psd, n},
                    {conic::ConeType::NonNeg, t}};
  cp.c.assign(3 * t, 0.0);
  {
    std::vector<double> sp(t);
    conic::svec(p, sp.data());
    for (int i = 0; i < t; ++i) cp.c[rel.var_nonneg + i] = sp[i];
  }

  std::vector<Triplet> trip;
  cp.b.assign(2 * t, 0.0);
  int row = 0;
  // <E_ij, X> - <E_ij, X - A> = A_ij
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const int sv = conic::svec_index(n, i, j);
      const double coef = (i == j) ? 1.0 : kInvSqrt2;
      trip.push_back({row, rel.var_nonneg + sv, coef});
      trip.push_back({row, rel.var_psd + sv, -coef});
      cp.b[row] = 0.5 * (am(i, j) + am(j, i));
      ++row;
    }
  // <E_ij, X + A> - <E_ij, X> = A_ij
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const int sv = conic::svec_index(n, i, j);
      const double coef = (i == j) ? 1.0 : kInvSqrt2;
      trip.push_back({row, rel.var_psd2 + sv, coef});
      trip.push_back({row, rel.var_nonneg + sv, -coef});
      cp.b[row] = 0.5 * (am(i, j) + am(j, i));
      ++row;
    }

  cp.constraints = kernels::csr_from_triplets(2 * t, 3 * t, std::move(trip));
  return rel;
}

Relaxation build_levelk(const NonnegMatrix& a, int k,
                        const std::optional<std::pair<SymWeight, SymWeight>>& weights,
                        int gram_cap) {
  if (k < 1) throw ValueError("build_levelk requires k >= 1 (use build_level0)");
  const int m = a.rows();
  const int n = a.cols();
  const int v = m + n;
  auto [p, q] = weight_matrices(a, weights);

  const long gside = gram_dimension(v, k);
  if (gside > gram_cap)
    throw TooLargeError(
        "SOS Gram side " + std::to_string(gside) + " exceeds the cap " +
        std::to_string(gram_cap) +
        "; export the problem with export-sdpa and use an external SDP solver");

  Relaxation rel;
  rel.form = RelaxationForm::LevelK;
  rel.m = m;
  rel.n = n;
  rel.level = k;
  if (weights) rel.weights = std::make_pair(p, q);
  rel.objective_sign = -1.0;
  rel.gram_side = static_cast<int>(gside);

  const int nw = m * n;
  const int gs = static_cast<int>(gside);
  const int gvec = conic::svec_length(gs);
  rel.var_w = 0;
  rel.var_psd = nw;

  conic::ConicProblem& cp = rel.problem;
  cp.cone.blocks = {{conic::ConeType::Free, nw}, {conic::ConeType::Psd, gs}};
  cp.c.assign(nw + gvec, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) cp.c[static_cast<size_t>(i) * n + j] = -a(i, j);

  const std::vector<std::vector<int>> basis = monomials(v, k + 2);
  const std::vector<std::vector<int>> rows = monomials(v, 2 * k + 4);
  std::map<std::vector<int>, int> basis_index;
  for (int i = 0; i < gs; ++i) basis_index[basis[i]] = i;

  // diagonal of blockdiag(P, Q) indexed over all v variables
  auto block_entry = [&](int i, int j) -> double {
    if (i < m && j < m) return p(i, j);
    if (i >= m && j >= m) return q(i - m, j - m);
    return 0.0;  // cross entries are the -W unknowns
  };

  std::vector<Triplet> trip;
  cp.b.assign(rows.size(), 0.0);
  std::vector<int> gamma(v), mu(v), delta(v);
  for (size_t r = 0; r < rows.size(); ++r) {
    const std::vector<int>& alpha = rows[r];
    // Gram pairs {beta, gamma} with beta + gamma = alpha
    for (int ib = 0; ib < gs; ++ib) {
      const std::vector<int>& beta = basis[ib];
      bool ok = true;
      for (int t = 0; t < v; ++t) {
        gamma[t] = alpha[t] - beta[t];
        if (gamma[t] < 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      auto it = basis_index.find(gamma);
      if (it == basis_index.end()) continue;
      const int ig = it->second;
      if (ig < ib) continue;  // count each unordered pair once
      const int sv = conic::svec_index(gs, ib, ig);
      trip.push_back({static_cast<int>(r), rel.var_psd + sv, ib == ig ? 1.0 : kSqrt2});
    }
    // coefficient of x^alpha in (sum x^2)^k * sum_ij M_ij x_i^2 x_j^2
    bool even = true;
    for (int t = 0; t < v; ++t) {
      if (alpha[t] % 2 != 0) {
        even = false;
        break;
      }
      mu[t] = alpha[t] / 2;
    }
    if (!even) continue;
    double rhs = 0.0;
    for (int i = 0; i < v; ++i) {
      if (mu[i] < 2) continue;
      delta = mu;
      delta[i] -= 2;
      rhs += block_entry(i, i) * multinomial(k, delta);
    }
    for (int i = 0; i < v; ++i) {
      if (mu[i] < 1) continue;
      for (int j = i + 1; j < v; ++j) {
        if (mu[j] < 1) continue;
        delta = mu;
        --delta[i];
        --delta[j];
        const double mult = multinomial(k, delta);
        if (j < m || i >= m) {
          rhs += 2.0 * mult * block_entry(i, j);  // same-block pair
        } else {
          // cross pair: M_ij = -W_{i, j-m}, moved to the left-hand side
          trip.push_back({static_cast<int>(r), rel.var_w + i * n + (j - m), 2.0 * mult});
        }
      }
    }
    cp.b[r] = rhs;
  }

  cp.constraints =
      kernels::csr_from_triplets(static_cast<int>(rows.size()), nw + gvec, std::move(trip));
  return rel;
}

Relaxation build_nuclear_pair(const DenseMatrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  const int d = m + n;

  Relaxation rel;
  rel.form = RelaxationForm::NuclearPair;
  rel.m = m;
  rel.n = n;
  rel.level = 0;
  rel.objective_sign = 1.0;
  rel.var_psd = 0;
  rel.rows_cross = 0;

  const int t = conic::svec_length(d);
  conic::ConicProblem& cp = rel.problem;
  cp.cone.blocks = {{conic::ConeType::Psd, d}};
  cp.c.assign(t, 0.0);
  for (int i = 0; i < d; ++i) cp.c[conic::svec_index(d, i, i)] = 0.5;

  std::vector<Triplet> trip;
  cp.b.assign(static_cast<size_t>(m) * n, 0.0);
  int row = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      trip.push_back({row, conic::svec_index(d, i, m + j), kInvSqrt2});
      cp.b[row] = a(i, j);
      ++row;
    }
  cp.constraints = kernels::csr_from_triplets(m * n, t, std::move(trip));
  return rel;
}

Relaxation build_relaxation(const NonnegMatrix& a, const RelaxationSpec& spec) {
  if (spec.level < 0) throw ValueError("relaxation level must be nonnegative");
  if (spec.level >= 1) return build_levelk(a, spec.level, spec.weights, spec.gram_cap);

  const bool weights_reducible =
      !spec.weights ||
      frobenius_norm(spec.weights->first.matrix() - spec.weights->second.matrix()) <=
          1e-12 * std::max(frobenius_norm(spec.weights->first.matrix()), 1.0);
  switch (spec.reduction) {
    case SymmetricReduction::On:
      return build_symmetric_reduced(a, spec.weights);
    case SymmetricReduction::Off:
      return build_level0(a, spec.weights);
    case SymmetricReduction::Auto:
      if (nearly_symmetric(a.matrix(), 1e-10) && weights_reducible)
        return build_symmetric_reduced(a, spec.weights);
      return build_level0(a, spec.weights);
  }
  throw Error("unreachable");
}

DenseMatrix Relaxation::recover_w(const conic::ConicSolution& sol) const {
  switch (form) {
    case RelaxationForm::Level0Full:
    case RelaxationForm::LevelK: {
      DenseMatrix w(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = sol.primal[var_w + i * n + j];
      return w;
    }
    case RelaxationForm::Level0Reduced: {
      DenseMatrix y1 = conic::extract_dual_sym(sol, {0, n});
      DenseMatrix y2 = conic::extract_dual_sym(sol, {rows_r2, n});
      return y1 + y2;
    }
    case RelaxationForm::NuclearPair:
      return conic::extract_dual_block(sol, {rows_cross, m, n, 1.0});
  }
  throw Error("unreachable");
}

bounds::Certificate Relaxation::recover_certificate(const conic::ConicSolution& sol) const {
  bounds::Certificate cert;
  cert.weights = weights;
  const int d = m + n;
  switch (form) {
    case RelaxationForm::Level0Full: {
      cert.w = recover_w(sol);
      cert.nonneg_part = conic::smat(d, sol.primal.data() + var_nonneg);
      cert.psd_part = conic::smat(d, sol.primal.data() + var_psd);
      break;
    }
    case RelaxationForm::Level0Reduced: {
      DenseMatrix y1 = conic::extract_dual_sym(sol, {0, n});
      DenseMatrix y2 = conic::extract_dual_sym(sol, {rows_r2, n});
      DenseMatrix w = y1 + y2;
      DenseMatrix r = y1 - y2;
      DenseMatrix p = weights ? weights->first : DenseMatrix::identity(n);
      cert.w = w;
      cert.nonneg_part = DenseMatrix(d, d, 0.0);
      cert.psd_part = DenseMatrix(d, d, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cert.nonneg_part(i, j) = p(i, j) - r(i, j);
          cert.nonneg_part(n + i, n + j) = p(i, j) - r(i, j);
          cert.psd_part(i, j) = r(i, j);
          cert.psd_part(n + i, n + j) = r(i, j);
          cert.psd_part(i, n + j) = -w(i, j);
          cert.psd_part(n + j, i) = -w(i, j);
        }
      break;
    }
    case RelaxationForm::LevelK:
    case RelaxationForm::NuclearPair: {
      // No N + S+ split is available from these forms; certify against the
      // pure PSD part (always sound, possibly loose for k >= 1).
      cert.w = recover_w(sol);
      cert.nonneg_part = DenseMatrix(d, d, 0.0);
      cert.psd_part = DenseMatrix(d, d, 0.0);
      DenseMatrix p = weights ? weights->first : DenseMatrix::identity(m);
      DenseMatrix q = weights ? weights->second : DenseMatrix::identity(n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) cert.psd_part(i, j) = p(i, j);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cert.psd_part(m + i, m + j) = q(i, j);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          cert.psd_part(i, m + j) = -cert.w(i, j);
          cert.psd_part(m + j, i) = -cert.w(i, j);
        }
      break;
    }
  }
  cert.normalize();
  return cert;
}

std::optional<CpWitness> Relaxation::recover_cp_witness(const conic::ConicSolution& sol) const {
  switch (form) {
    case RelaxationForm::Level0Full: {
      DenseMatrix zx = conic::extract_dual_sym(sol, {rows_p, m});
      DenseMatrix zy = conic::extract_dual_sym(sol, {rows_q, n});
      return CpWitness{-2.0 * zx, -2.0 * zy};
    }
    case RelaxationForm::Level0Reduced: {
      DenseMatrix x = conic::smat(n, sol.primal.data() + var_nonneg);
      return CpWitness{x, x};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace nnrank::relax
