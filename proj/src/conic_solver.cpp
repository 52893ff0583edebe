#include "nnrank/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace nnrank::conic {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Dense Gram matrix G = M M^T built column-by-column of M (deterministic
// accumulation order), lower triangle then mirrored.
std::vector<double> build_gram(const kernels::Csr& m, const kernels::Csr& mt) {
  const int p = m.rows;
  std::vector<double> g(static_cast<size_t>(p) * p, 0.0);
  for (int c = 0; c < mt.rows; ++c) {
    const int begin = mt.ptr[c];
    const int end = mt.ptr[c + 1];
    for (int a = begin; a < end; ++a) {
      const int r = mt.idx[a];
      const double va = mt.val[a];
      for (int bidx = begin; bidx <= a; ++bidx) {
        const int s = mt.idx[bidx];
        g[static_cast<size_t>(r) * p + s] += va * mt.val[bidx];
      }
    }
  }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) g[static_cast<size_t>(i) * p + j] = g[static_cast<size_t>(j) * p + i];
  return g;
}

}  // namespace

void ConicProblem::validate() const {
  cone.validate();
  const int nvar = cone.length();
  if (static_cast<int>(c.size()) != nvar)
    throw DimensionError("conic problem: objective length does not match cone length");
  if (constraints.cols != nvar)
    throw DimensionError("conic problem: constraint columns do not match cone length");
  if (static_cast<int>(b.size()) != constraints.rows)
    throw DimensionError("conic problem: rhs length does not match constraint rows");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::InfeasibleSuspected: return "infeasible_suspected";
  }
  return "unknown";
}

ConicSolution solve(const ConicProblem& p, double tol, long max_iter) {
  SolverOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return solve(p, opt);
}

ConicSolution solve(const ConicProblem& prob, const SolverOptions& opt) {
  prob.validate();
  if (opt.tol <= 0.0) throw ValueError("solver tolerance must be positive");
  if (opt.max_iter <= 0) throw ValueError("solver max_iter must be positive");

  const int nvar = prob.cone.length();
  const int nrow = prob.constraints.rows;

  // Ruiz equilibration: iterate in scaled data M' = Dr M Dc, b' = Dr b,
  // c' = Dc c. Column scaling is uniform across each PSD block so the cone is
  // preserved; termination is still tested on the original problem's
  // residuals, and the reported solution is unscaled.
  std::vector<double> dr(nrow, 1.0), dc(nvar, 1.0);
  kernels::Csr m = prob.constraints;
  if (opt.equilibrate && nrow > 0) {
    std::vector<int> group(nvar);
    int ngroups = 0;
    {
      int off = 0;
      for (const ConeBlock& blk : prob.cone.blocks) {
        const int len = blk.length();
        if (blk.type == ConeType::Psd) {
          for (int i = 0; i < len; ++i) group[off + i] = ngroups;
          ++ngroups;
        } else {
          for (int i = 0; i < len; ++i) group[off + i] = ngroups++;
        }
        off += len;
      }
    }
    std::vector<double> gmax(ngroups);
    for (int round = 0; round < opt.ruiz_rounds; ++round) {
      for (int r = 0; r < nrow; ++r) {
        double mx = 0.0;
        for (int p = m.ptr[r]; p < m.ptr[r + 1]; ++p) mx = std::max(mx, std::fabs(m.val[p]));
        if (mx <= 0.0) continue;
        const double f = 1.0 / std::sqrt(mx);
        dr[r] *= f;
        for (int p = m.ptr[r]; p < m.ptr[r + 1]; ++p) m.val[p] *= f;
      }
      std::fill(gmax.begin(), gmax.end(), 0.0);
      for (int r = 0; r < nrow; ++r)
        for (int p = m.ptr[r]; p < m.ptr[r + 1]; ++p) {
          double& g = gmax[group[m.idx[p]]];
          g = std::max(g, std::fabs(m.val[p]));
        }
      for (double& g : gmax) g = g > 0.0 ? 1.0 / std::sqrt(g) : 1.0;
      for (int r = 0; r < nrow; ++r)
        for (int p = m.ptr[r]; p < m.ptr[r + 1]; ++p) m.val[p] *= gmax[group[m.idx[p]]];
      for (int j = 0; j < nvar; ++j) dc[j] *= gmax[group[j]];
    }
  }
  std::vector<double> b_s(nrow), c_s(nvar);
  for (int i = 0; i < nrow; ++i) b_s[i] = dr[i] * prob.b[i];
  for (int j = 0; j < nvar; ++j) c_s[j] = dc[j] * prob.c[j];

  const kernels::Csr mt = kernels::csr_transpose(m);

  // Factor M M^T + ridge once; the equality-projection step is
  //   minimize ||z - v + c/rho||^2  s.t.  M z = b
  // whose KKT matrix does not depend on rho. Tiny ridge plus iterative
  // refinement against the true Gram matrix tolerates redundant rows.
  std::vector<double> factor, factor_t;
  double ridge = 0.0;
  if (nrow > 0) {
    const std::vector<double> gram = build_gram(m, mt);
    double max_diag = 0.0;
    for (int i = 0; i < nrow; ++i)
      max_diag = std::max(max_diag, gram[static_cast<size_t>(i) * nrow + i]);
    ridge = 1e-12 * (1.0 + max_diag);
    for (int attempt = 0; attempt < 4; ++attempt) {
      factor = gram;
      for (int i = 0; i < nrow; ++i) factor[static_cast<size_t>(i) * nrow + i] += ridge;
      if (kernels::cholesky(nrow, factor.data())) break;
      ridge *= 1e4;
      if (attempt == 3) throw Error("conic solver: Gram factorization failed");
    }
    factor_t.assign(static_cast<size_t>(nrow) * nrow, 0.0);
    for (int i = 0; i < nrow; ++i)
      for (int j = 0; j <= i; ++j)
        factor_t[static_cast<size_t>(j) * nrow + i] = factor[static_cast<size_t>(i) * nrow + j];
  }

  auto gram_solve = [&](std::vector<double>& rhs) {
    // One refinement sweep against the exact M M^T (the ridge is tiny).
    std::vector<double> x = rhs;
    kernels::cholesky_solve_t(nrow, factor.data(), factor_t.data(), x.data());
    std::vector<double> tmp_var(nvar), tmp_row(nrow);
    for (int sweep = 0; sweep < 1; ++sweep) {
      kernels::csr_matvec(mt, x.data(), tmp_var.data());
      kernels::csr_matvec(m, tmp_var.data(), tmp_row.data());
      for (int i = 0; i < nrow; ++i) tmp_row[i] = rhs[i] - tmp_row[i];
      kernels::cholesky_solve_t(nrow, factor.data(), factor_t.data(), tmp_row.data());
      for (int i = 0; i < nrow; ++i) x[i] += tmp_row[i];
    }
    rhs = x;
  };

  const double alpha = opt.over_relaxation;
  double rho = opt.rho;
  const double norm_b = norm2(prob.b);
  const double norm_c = norm2(prob.c);

  std::vector<double> zt(nvar, 0.0);  // cone iterate (z tilde)
  std::vector<double> u(nvar, 0.0);   // scaled dual of the consensus constraint
  std::vector<double> z(nvar, 0.0), t(nvar), w(nvar);
  std::vector<double> nu(nrow, 0.0), rhs(nrow), mrow(nrow);
  std::vector<double> mty(nvar), s(nvar), slack(nvar);

  ConicSolution sol;
  sol.primal.assign(nvar, 0.0);
  sol.dual.assign(nrow, 0.0);
  sol.dual_slack.assign(nvar, 0.0);

  // Anderson acceleration over the fixed-point pair x = (zt, u). The plain
  // step always runs first and termination is tested on its (cone-exact)
  // image; acceleration only chooses the next input point.
  const int aa_mem = std::max(opt.aa_memory, 0);
  const int aa_dim = 2 * nvar;
  std::vector<std::vector<double>> aa_df, aa_dg;  // difference history
  std::vector<double> aa_fprev, aa_gprev, aa_f(aa_dim), aa_g(aa_dim), aa_x(aa_dim);
  std::vector<double> aa_fallback(aa_dim, 0.0);  // last accepted plain image
  double aa_accepted_res = 0.0;
  bool aa_have_prev = false;
  bool aa_pending = false;  // last input was an accelerated point
  auto aa_reset = [&]() {
    aa_df.clear();
    aa_dg.clear();
    aa_have_prev = false;
    aa_pending = false;
  };

  if (opt.log) *opt.log << "iteration,res_primal,res_dual,res_gap,primal_objective,dual_objective\n";

  auto compute_residuals = [&](double& rp, double& rd, double& rg, double& pobj, double& dobj) {
    // residuals in the ORIGINAL (unscaled) problem data; the scaled residual
    // vectors unscale entrywise through Dr and Dc
    kernels::csr_matvec(m, zt.data(), mrow.data());
    double acc = 0.0;
    for (int i = 0; i < nrow; ++i) {
      double d = (mrow[i] - b_s[i]) / dr[i];
      acc += d * d;
    }
    rp = std::sqrt(acc) / (1.0 + norm_b);
    // dual: ||c - M^T y - s|| / (1 + ||c||), y = -nu, s = -rho u
    kernels::csr_matvec(mt, nu.data(), mty.data());
    acc = 0.0;
    for (int i = 0; i < nvar; ++i) {
      double d = (c_s[i] + mty[i] + rho * u[i]) / dc[i];
      acc += d * d;
    }
    rd = std::sqrt(acc) / (1.0 + norm_c);
    pobj = dot(c_s, zt);
    dobj = 0.0;
    for (int i = 0; i < nrow; ++i) dobj -= b_s[i] * nu[i];
    rg = std::fabs(pobj - dobj) / (1.0 + std::fabs(pobj) + std::fabs(dobj));
  };

  long it = 0;
  for (it = 1; it <= opt.max_iter; ++it) {
    if (aa_mem > 0)
      for (int i = 0; i < nvar; ++i) {
        aa_x[i] = zt[i];
        aa_x[nvar + i] = u[i];
      }
    // equality-projection step
    for (int i = 0; i < nvar; ++i) t[i] = zt[i] - u[i] - c_s[i] / rho;
    if (nrow > 0) {
      kernels::csr_matvec(m, t.data(), mrow.data());
      for (int i = 0; i < nrow; ++i) rhs[i] = rho * (mrow[i] - b_s[i]);
      nu = rhs;
      gram_solve(nu);
      kernels::csr_matvec(mt, nu.data(), mty.data());
      for (int i = 0; i < nvar; ++i) z[i] = t[i] - mty[i] / rho;
    } else {
      z = t;
    }
    // over-relaxation, cone projection, dual update
    for (int i = 0; i < nvar; ++i) w[i] = alpha * z[i] + (1.0 - alpha) * zt[i] + u[i];
    zt = w;
    prob.cone.project(zt);
    for (int i = 0; i < nvar; ++i) u[i] = w[i] - zt[i];

    const bool check = (it % opt.check_every == 0) || it == opt.max_iter;
    if (check) {
      double rp, rd, rg, pobj, dobj;
      compute_residuals(rp, rd, rg, pobj, dobj);
      sol.res_primal = rp;
      sol.res_dual = rd;
      sol.res_gap = rg;
      sol.primal_objective = pobj;
      sol.dual_objective = dobj;
      if (opt.log && (it % opt.log_every == 0 || it == opt.max_iter))
        *opt.log << it << "," << rp << "," << rd << "," << rg << "," << pobj << "," << dobj << "\n";
      if (rp <= opt.tol && rd <= opt.tol && rg <= opt.tol) {
        sol.status = SolveStatus::Optimal;
        sol.iterations = it;
        break;
      }
      if (!all_finite(zt) || !all_finite(u) ||
          norm2(zt) > 1e14 * (1.0 + norm_b + norm_c)) {
        sol.status = SolveStatus::InfeasibleSuspected;
        sol.iterations = it;
        break;
      }
    }

    if (it % opt.rho_adapt_every == 0) {
      // rescale the penalty when the primal/dual residual ratio drifts
      double rp, rd, rg, pobj, dobj;
      compute_residuals(rp, rd, rg, pobj, dobj);
      if (rp > 10.0 * rd && rho < 1e8) {
        rho *= 2.0;
        for (int i = 0; i < nvar; ++i) u[i] *= 0.5;
        aa_reset();
      } else if (rd > 10.0 * rp && rho > 1e-8) {
        rho *= 0.5;
        for (int i = 0; i < nvar; ++i) u[i] *= 2.0;
        aa_reset();
      }
    }

    if (aa_mem > 0) {
      for (int i = 0; i < nvar; ++i) {
        aa_g[i] = zt[i];
        aa_g[nvar + i] = u[i];
      }
      for (int i = 0; i < aa_dim; ++i) aa_f[i] = aa_g[i] - aa_x[i];
      double fnorm = 0.0;
      for (double v : aa_f) fnorm += v * v;
      fnorm = std::sqrt(fnorm);
      if (aa_pending && fnorm > opt.aa_safeguard * aa_accepted_res) {
        // the accelerated point degraded the step residual: resume plain
        // iteration from the remembered image and drop the history
        for (int i = 0; i < nvar; ++i) {
          zt[i] = aa_fallback[i];
          u[i] = aa_fallback[nvar + i];
        }
        aa_reset();
        continue;
      }
      aa_accepted_res = fnorm;
      if (aa_have_prev) {
        std::vector<double> df(aa_dim), dg(aa_dim);
        for (int i = 0; i < aa_dim; ++i) {
          df[i] = aa_f[i] - aa_fprev[i];
          dg[i] = aa_g[i] - aa_gprev[i];
        }
        aa_df.push_back(std::move(df));
        aa_dg.push_back(std::move(dg));
        if (static_cast<int>(aa_df.size()) > aa_mem) {
          aa_df.erase(aa_df.begin());
          aa_dg.erase(aa_dg.begin());
        }
      }
      aa_fprev = aa_f;
      aa_gprev = aa_g;
      aa_have_prev = true;
      aa_fallback = aa_g;
      aa_pending = false;
      const int mcols = static_cast<int>(aa_df.size());
      if (mcols > 0) {
        // theta = argmin ||f - dF theta|| by regularized normal equations
        std::vector<double> gram_aa(static_cast<size_t>(mcols) * mcols);
        std::vector<double> rhs_aa(mcols);
        for (int a = 0; a < mcols; ++a) {
          for (int b2 = a; b2 < mcols; ++b2) {
            double acc = 0.0;
            for (int i = 0; i < aa_dim; ++i) acc += aa_df[a][i] * aa_df[b2][i];
            gram_aa[static_cast<size_t>(a) * mcols + b2] = acc;
            gram_aa[static_cast<size_t>(b2) * mcols + a] = acc;
          }
          double acc = 0.0;
          for (int i = 0; i < aa_dim; ++i) acc += aa_df[a][i] * aa_f[i];
          rhs_aa[a] = acc;
        }
        double tr = 0.0;
        for (int a = 0; a < mcols; ++a) tr += gram_aa[static_cast<size_t>(a) * mcols + a];
        const double reg = 1e-12 * (1.0 + tr);
        for (int a = 0; a < mcols; ++a) gram_aa[static_cast<size_t>(a) * mcols + a] += reg;
        if (kernels::cholesky(mcols, gram_aa.data())) {
          kernels::cholesky_solve(mcols, gram_aa.data(), rhs_aa.data());
          double theta2 = 0.0;
          for (int a = 0; a < mcols; ++a) theta2 += rhs_aa[a] * rhs_aa[a];
          if (theta2 <= 1e8) {  // skip wild extrapolations
            // accelerated input for the next iteration: g - dG theta
            for (int i = 0; i < nvar; ++i) {
              double az = aa_g[i];
              double au = aa_g[nvar + i];
              for (int a = 0; a < mcols; ++a) {
                az -= rhs_aa[a] * aa_dg[a][i];
                au -= rhs_aa[a] * aa_dg[a][nvar + i];
              }
              zt[i] = az;
              u[i] = au;
            }
            aa_pending = true;
          }
        }
      }
    }
  }

  if (sol.iterations == 0) {
    // fell out of the loop: residuals were last computed at it == max_iter
    sol.iterations = opt.max_iter;
    sol.status = SolveStatus::MaxIter;
  }

  for (int i = 0; i < nvar; ++i) sol.primal[i] = dc[i] * zt[i];
  for (int i = 0; i < nrow; ++i) sol.dual[i] = -dr[i] * nu[i];
  for (int i = 0; i < nvar; ++i) sol.dual_slack[i] = -rho * u[i] / dc[i];
  return sol;
}

DenseMatrix extract_dual_block(const ConicSolution& sol, const DualBlockSpec& spec) {
  if (spec.row_begin < 0 || spec.rows <= 0 || spec.cols <= 0 ||
      spec.row_begin + static_cast<long>(spec.rows) * spec.cols >
          static_cast<long>(sol.dual.size()))
    throw DimensionError("extract_dual_block: range out of bounds");
  DenseMatrix w(spec.rows, spec.cols);
  int r = spec.row_begin;
  for (int i = 0; i < spec.rows; ++i)
    for (int j = 0; j < spec.cols; ++j) w(i, j) = sol.dual[r++] / spec.scale;
  return w;
}

DenseMatrix extract_dual_sym(const ConicSolution& sol, const SymDualBlockSpec& spec) {
  const int n = spec.side;
  if (spec.row_begin < 0 || n <= 0 ||
      spec.row_begin + n * (n + 1) / 2 > static_cast<int>(sol.dual.size()))
    throw DimensionError("extract_dual_sym: range out of bounds");
  DenseMatrix x(n, n);
  int r = spec.row_begin;
  for (int i = 0; i < n; ++i) {
    x(i, i) = sol.dual[r++];
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * sol.dual[r++];
      x(i, j) = v;
      x(j, i) = v;
    }
  }
  return x;
}

}  // namespace nnrank::conic
