#pragma once

#include <iosfwd>
#include <vector>

#include "nnrank/cones.hpp"
#include "nnrank/kernels.hpp"

namespace nnrank::conic {

/// Standard-form cone program
///     minimize    c^T z
///     subject to  constraints * z = b,   z in cone.
/// Constraint rows need not be linearly independent.
struct ConicProblem {
  std::vector<double> c;
  std::vector<double> b;
  kernels::Csr constraints;
  ConeProduct cone;

  void validate() const;
};

enum class SolveStatus { Optimal, MaxIter, InfeasibleSuspected };

const char* to_string(SolveStatus s);

struct ConicSolution {
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<double> primal;      // z, in the cone exactly (post-projection)
  std::vector<double> dual;        // y, one multiplier per constraint row
  std::vector<double> dual_slack;  // s = -rho*u, in the dual cone exactly
  double primal_objective = 0.0;   // c^T z
  double dual_objective = 0.0;     // b^T y
  double res_primal = 0.0;
  double res_dual = 0.0;
  double res_gap = 0.0;
  long iterations = 0;
};

struct SolverOptions {
  double tol = 1e-7;
  long max_iter = 200000;
  double rho = 1.0;               // initial ADMM penalty
  double over_relaxation = 1.5;
  long check_every = 25;          // residual/termination cadence
  long rho_adapt_every = 100;     // penalty self-rescaling cadence
  bool equilibrate = true;        // Ruiz row/column scaling of the data
  int ruiz_rounds = 10;
  int aa_memory = 10;             // Anderson acceleration depth (0 disables)
  double aa_safeguard = 2.0;      // reset memory when the step residual grows
  std::ostream* log = nullptr;    // optional CSV sink
  long log_every = 100;
};

/// Operator-splitting (ADMM) solver. Deterministic: fixed zero
/// initialization, fixed iteration order, order-independent parallel kernels.
ConicSolution solve(const ConicProblem& p, const SolverOptions& options = {});
ConicSolution solve(const ConicProblem& p, double tol, long max_iter);

/// A contiguous range of constraint rows whose multipliers form a matrix,
/// rows-major entry order; each multiplier is divided by `scale`.
struct DualBlockSpec {
  int row_begin = 0;
  int rows = 0;
  int cols = 0;
  double scale = 1.0;
};

DenseMatrix extract_dual_block(const ConicSolution& sol, const DualBlockSpec& spec);

/// Multipliers of per-entry constraints on a symmetric matrix written in the
/// <symmetrized unit, X> form (rows enumerate the upper triangle row-major):
/// the assembled matrix has M_ii = y_ii and M_ij = M_ji = y_ij / 2.
struct SymDualBlockSpec {
  int row_begin = 0;
  int side = 0;
};

DenseMatrix extract_dual_sym(const ConicSolution& sol, const SymDualBlockSpec& spec);

}  // namespace nnrank::conic
