#include "nnrank/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "nnrank/spectral.hpp"

namespace nnrank::bounds {

// ---------------------------------------------------------------------------
// Certificate
// ---------------------------------------------------------------------------

DenseMatrix Certificate::block_matrix() const {
  const int mm = m();
  const int nn = n();
  const int d = mm + nn;
  DenseMatrix p = weights ? weights->first : DenseMatrix::identity(mm);
  DenseMatrix q = weights ? weights->second : DenseMatrix::identity(nn);
  DenseMatrix blk(d, d, 0.0);
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < mm; ++j) blk(i, j) = p(i, j);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) blk(mm + i, mm + j) = q(i, j);
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nn; ++j) {
      blk(i, mm + j) = -w(i, j);
      blk(mm + j, i) = -w(i, j);
    }
  return blk;
}

void Certificate::check_shapes() const {
  const int d = m() + n();
  if (nonneg_part.rows() != d || nonneg_part.cols() != d || psd_part.rows() != d ||
      psd_part.cols() != d)
    throw DimensionError("certificate parts must be (m+n) x (m+n)");
  if (weights && (weights->first.rows() != m() || weights->second.rows() != n()))
    throw DimensionError("certificate weights do not match W");
}

void Certificate::normalize() {
  check_shapes();
  const int d = m() + n();
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      double nv = 0.5 * (nonneg_part(i, j) + nonneg_part(j, i));
      nv = std::max(nv, 0.0);
      nonneg_part(i, j) = nv;
      nonneg_part(j, i) = nv;
      double pv = 0.5 * (psd_part(i, j) + psd_part(j, i));
      psd_part(i, j) = pv;
      psd_part(j, i) = pv;
    }
}

// ---------------------------------------------------------------------------
// Classic bounds
// ---------------------------------------------------------------------------

double nuclear_norm(const DenseMatrix& a) {
  const spectral::SvdResult s = spectral::svd(a);
  double sum = 0.0;
  for (double v : s.singular_values) sum += v;
  return sum;
}

double classic_rank_bound(const DenseMatrix& a) {
  const double f = frobenius_norm(a);
  if (f == 0.0) return 0.0;
  const double nu = nuclear_norm(a);
  return (nu / f) * (nu / f);
}

int numerical_rank(const DenseMatrix& a, double rel_tol) {
  const spectral::SvdResult s = spectral::svd(a);
  if (s.singular_values.empty() || s.singular_values.front() == 0.0) return 0;
  const double cutoff = rel_tol * s.singular_values.front();
  int r = 0;
  for (double v : s.singular_values)
    if (v > cutoff) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// NonnegFactorization
// ---------------------------------------------------------------------------

double NonnegFactorization::lambda_sum() const {
  double s = 0.0;
  for (double l : lambdas) s += l;
  return s;
}

DenseMatrix NonnegFactorization::to_matrix() const {
  DenseMatrix a(m(), n(), 0.0);
  for (int t = 0; t < terms(); ++t)
    for (int i = 0; i < m(); ++i)
      for (int j = 0; j < n(); ++j) a(i, j) += lambdas[t] * us[t][i] * vs[t][j];
  return a;
}

void NonnegFactorization::validate() const {
  if (lambdas.size() != us.size() || lambdas.size() != vs.size())
    throw DimensionError("factorization term counts differ");
  for (int t = 0; t < terms(); ++t) {
    if (lambdas[t] < 0.0) throw ValueError("factorization weight is negative");
    if (us[t].size() != us[0].size() || vs[t].size() != vs[0].size())
      throw DimensionError("factorization vector lengths differ");
    double nu = 0.0, nv = 0.0;
    for (double x : us[t]) {
      if (x < 0.0) throw ValueError("factorization vector has a negative entry");
      nu += x * x;
    }
    for (double x : vs[t]) {
      if (x < 0.0) throw ValueError("factorization vector has a negative entry");
      nv += x * x;
    }
    if (std::fabs(nu - 1.0) > 1e-10 || std::fabs(nv - 1.0) > 1e-10)
      throw ValueError("factorization vectors must have unit norm");
  }
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

VerificationReport verify_certificate(const NonnegMatrix& a, const Certificate& cert) {
  if (cert.m() != a.rows() || cert.n() != a.cols())
    throw DimensionError("certificate shape does not match matrix");
  cert.check_shapes();

  VerificationReport rep;
  const DenseMatrix blk = cert.block_matrix();
  rep.eq_residual = frobenius_norm(cert.nonneg_part + cert.psd_part - blk);
  rep.min_nonneg_entry = 0.0;
  for (long i = 0; i < cert.nonneg_part.size(); ++i)
    rep.min_nonneg_entry = std::min(rep.min_nonneg_entry, cert.nonneg_part.data()[i]);
  rep.psd_lambda_min = spectral::min_eigenvalue(cert.psd_part);
  rep.objective = inner(a.matrix(), cert.w);
  return rep;
}

double round_certificate(const NonnegMatrix& a, const Certificate& cert) {
  if (cert.m() != a.rows() || cert.n() != a.cols())
    throw DimensionError("certificate shape does not match matrix");
  // Soundness of the shrink: with N = max(nonneg_part, 0) and
  // delta >= -lambda_min(blk - N), the matrix blk + delta*I = N + (blk-N+delta*I)
  // lies in N + S+. For t = 1/(1 + delta/p_min),
  //   t*blk + (1-t)*blockdiag(P,Q) = [[P, -tW], [-tW^T, Q]]
  // and (1-t)*blockdiag(P,Q) - t*delta*I = t*delta*(blockdiag(P,Q)/p_min - I)
  // is entrywise nonnegative because every diagonal entry of P, Q is >= p_min
  // and the off-diagonal entries are >= 0. Hence tW is feasible and
  // <A, tW> <= nu+(A;P,Q). With P = Q = I this is the plain W/(1+delta) shrink.
  const int d = cert.m() + cert.n();
  DenseMatrix residual = cert.block_matrix();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) residual(i, j) -= std::max(cert.nonneg_part(i, j), 0.0);
  const double lam_min = spectral::min_eigenvalue(residual);
  const double margin = 1e-9 * (1.0 + frobenius_norm(cert.w));
  const double delta = std::max(0.0, -lam_min) + margin;
  double p_min = 1.0;
  if (cert.weights) {
    p_min = cert.weights->first(0, 0);
    for (int i = 0; i < cert.weights->first.rows(); ++i)
      p_min = std::min(p_min, cert.weights->first(i, i));
    for (int i = 0; i < cert.weights->second.rows(); ++i)
      p_min = std::min(p_min, cert.weights->second(i, i));
  }
  return inner(a.matrix(), cert.w) / (1.0 + delta / p_min);
}

double optimal_w_fixed_point_check(const DenseMatrix& w, const NonnegFactorization& fact) {
  if (fact.m() != w.rows() || fact.n() != w.cols())
    throw DimensionError("factorization shape does not match W");
  const int m = w.rows();
  const int n = w.cols();
  double dev = 0.0;
  for (int t = 0; t < fact.terms(); ++t) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += w(i, j) * fact.vs[t][j];
      dev = std::max(dev, std::fabs(fact.us[t][i] - std::max(acc, 0.0)));
    }
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += w(i, j) * fact.us[t][i];
      dev = std::max(dev, std::fabs(fact.vs[t][j] - std::max(acc, 0.0)));
    }
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

NuPlusEntry nu_plus_bound(const NonnegMatrix& a, const relax::RelaxationSpec& spec,
                          const conic::SolverOptions& options) {
  const relax::Relaxation rel = relax::build_relaxation(a, spec);
  const conic::ConicSolution sol = conic::solve(rel.problem, options);

  NuPlusEntry entry;
  entry.level = spec.level;
  entry.status = sol.status;
  entry.value = rel.value(sol);
  entry.res_primal = sol.res_primal;
  entry.res_dual = sol.res_dual;
  entry.res_gap = sol.res_gap;
  entry.iterations = sol.iterations;
  entry.certificate = rel.recover_certificate(sol);
  entry.certified_value = round_certificate(a, entry.certificate);

  double denom2;
  if (spec.weights)
    denom2 = weighted_gram_trace(a, spec.weights->first, spec.weights->second);
  else {
    const double f = frobenius_norm(a.matrix());
    denom2 = f * f;
  }
  entry.bound = entry.value * entry.value / denom2;
  return entry;
}

int best_integer_bound_from(double x) { return static_cast<int>(std::ceil(x - 1e-6)); }

BoundReport compute_bound_report(const NonnegMatrix& a, const relax::RelaxationSpec& spec,
                                 const conic::SolverOptions& options,
                                 const RectangleLimits& limits) {
  BoundReport rep;
  rep.m = a.rows();
  rep.n = a.cols();
  rep.frobenius = frobenius_norm(a.matrix());
  rep.nuclear = nuclear_norm(a.matrix());
  rep.numerical_rank = numerical_rank(a.matrix());
  rep.weighted = spec.weights.has_value();

  NuPlusEntry main = nu_plus_bound(a, spec, options);
  rep.nu_plus[spec.level] = main.value;
  rep.nu_plus_status[spec.level] = conic::to_string(main.status);
  if (spec.level > 0) {
    // level 0 also solved: it is cheap, and its certificate backs the
    // rigorous certified_value
    relax::RelaxationSpec base = spec;
    base.level = 0;
    NuPlusEntry zero = nu_plus_bound(a, base, options);
    rep.nu_plus[0] = zero.value;
    rep.nu_plus_status[0] = conic::to_string(zero.status);
    rep.certified_value = std::max(zero.certified_value, main.certified_value);
    rep.lower_bounds["nu_plus_" + std::to_string(spec.level) + "_ratio"] = main.bound;
    rep.lower_bounds["nu_plus_0_ratio"] = zero.bound;
  } else {
    rep.certified_value = main.certified_value;
    rep.lower_bounds["nu_plus_0_ratio"] = main.bound;
  }

  rep.lower_bounds["rank"] = rep.numerical_rank;
  {
    const double f = rep.frobenius;
    rep.lower_bounds["nuclear_ratio"] = f > 0.0 ? (rep.nuclear / f) * (rep.nuclear / f) : 0.0;
  }
  try {
    RectangleCover cover = rectangle_cover_exact(a.matrix(), limits);
    rep.rectangle_cover = cover.count;
    rep.lower_bounds["rectangle_cover"] = cover.count;
  } catch (const TooLargeError&) {
    rep.rectangle_cover.reset();
  }

  double best = 0.0;
  for (const auto& [name, v] : rep.lower_bounds) best = std::max(best, v);
  rep.best_integer_bound = best_integer_bound_from(best);
  return rep;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json matrix_to_json(const DenseMatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ValueError("JSON matrix must be a non-empty array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (static_cast<int>(row.size()) != cols) throw ValueError("JSON matrix is ragged");
    for (int c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
  }
  m.check_finite();
  return m;
}

}  // namespace

nlohmann::ordered_json BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["n"] = n;
  j["frobenius"] = frobenius;
  j["nuclear"] = nuclear;
  nlohmann::ordered_json np;
  for (const auto& [level, value] : nu_plus) np[std::to_string(level)] = value;
  j["nu_plus"] = std::move(np);
  j["certified_value"] = certified_value;
  nlohmann::ordered_json b;
  b["rank"] = static_cast<int>(lower_bounds.at("rank"));
  b["nuclear_ratio"] = lower_bounds.at("nuclear_ratio");
  for (const auto& [name, v] : lower_bounds)
    if (name.rfind("nu_plus_", 0) == 0) b[name] = v;
  if (rectangle_cover)
    b["rectangle_cover"] = *rectangle_cover;
  j["bounds"] = std::move(b);
  j["best_integer_bound"] = best_integer_bound;
  nlohmann::ordered_json st;
  for (const auto& [level, s] : nu_plus_status) st[std::to_string(level)] = s;
  j["solver"] = {{"status", std::move(st)}, {"weighted", weighted}};
  return j;
}

nlohmann::ordered_json certificate_to_json(const Certificate& cert) {
  nlohmann::ordered_json j;
  j["m"] = cert.m();
  j["n"] = cert.n();
  j["W"] = matrix_to_json(cert.w);
  j["nonneg_part"] = matrix_to_json(cert.nonneg_part);
  j["psd_part"] = matrix_to_json(cert.psd_part);
  if (cert.weights) {
    j["weights"] = {{"P", matrix_to_json(cert.weights->first)},
                    {"Q", matrix_to_json(cert.weights->second)}};
  }
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate cert;
  cert.w = matrix_from_json(j.at("W"));
  if (j.at("m").get<int>() != cert.w.rows() || j.at("n").get<int>() != cert.w.cols())
    throw ValueError("certificate JSON: m/n fields do not match W");
  cert.nonneg_part = matrix_from_json(j.at("nonneg_part"));
  cert.psd_part = matrix_from_json(j.at("psd_part"));
  if (j.contains("weights")) {
    cert.weights = std::make_pair(matrix_from_json(j.at("weights").at("P")),
                                  matrix_from_json(j.at("weights").at("Q")));
  }
  cert.normalize();
  return cert;
}

}  // namespace nnrank::bounds
