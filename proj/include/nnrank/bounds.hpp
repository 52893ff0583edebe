#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nnrank/certificate.hpp"
#include "nnrank/conic_solver.hpp"
#include "nnrank/dense_matrix.hpp"
#include "nnrank/relaxations.hpp"

namespace nnrank::bounds {

/// Sum of singular values.
double nuclear_norm(const DenseMatrix& a);

/// (nuclear_norm / ||A||_F)^2 — classic lower bound on rank(A).
double classic_rank_bound(const DenseMatrix& a);

/// Count of singular values above rel_tol * sigma_max.
int numerical_rank(const DenseMatrix& a, double rel_tol = 1e-9);

/// Planted nonnegative decomposition A = sum_i lambda_i u_i v_i^T with unit
/// nonnegative factors; reproduces its matrix within 1e-12.
struct NonnegFactorization {
  std::vector<double> lambdas;
  std::vector<std::vector<double>> us;  // each of length m, ||u||_2 = 1, u >= 0
  std::vector<std::vector<double>> vs;  // each of length n

  int terms() const { return static_cast<int>(lambdas.size()); }
  int m() const { return us.empty() ? 0 : static_cast<int>(us.front().size()); }
  int n() const { return vs.empty() ? 0 : static_cast<int>(vs.front().size()); }
  double lambda_sum() const;
  DenseMatrix to_matrix() const;
  void validate() const;
};

/// Deterministic feasibility report for a certificate; no optimization.
struct VerificationReport {
  double eq_residual = 0.0;       // ||nonneg + psd - [[P,-W],[-W^T,Q]]||_F
  double min_nonneg_entry = 0.0;  // min entry of nonneg_part
  double psd_lambda_min = 0.0;    // lambda_min(psd_part)
  double objective = 0.0;         // <A, W>

  bool pass(double tol) const {
    return eq_residual <= tol && min_nonneg_entry >= -tol && psd_lambda_min >= -tol;
  }
};

VerificationReport verify_certificate(const NonnegMatrix& a, const Certificate& cert);

/// Rigorous lower estimate of nu+(A;P,Q) from a (possibly inexact)
/// certificate: shrinks <A,W> by the certificate's PSD deficit.
double round_certificate(const NonnegMatrix& a, const Certificate& cert);

struct RectangleLimits {
  int max_support = 64;
  int max_rectangles = 30;
};

/// Cover of support(A) by all-nonzero combinatorial rectangles.
struct RectangleCover {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> rectangles;
  int count = 0;
};

/// Minimum cover by exhaustive set cover over the maximal all-nonzero
/// rectangles. Throws TooLargeError beyond the limits.
RectangleCover rectangle_cover_exact(const DenseMatrix& a, const RectangleLimits& limits = {});

/// max_i( ||u_i - P+(W v_i)||_inf, ||v_i - P+(W^T u_i)||_inf ) — the
/// fixed-point relations of an optimal W against a decomposition attaining
/// nu+(A). Diagnostic; exact only where the attaining decomposition is known.
double optimal_w_fixed_point_check(const DenseMatrix& w, const NonnegFactorization& fact);

struct NuPlusEntry {
  int level = 0;
  double value = 0.0;                 // relaxation optimum nu+^[k]
  double bound = 0.0;                 // squared ratio lower bound on rank+
  conic::SolveStatus status = conic::SolveStatus::MaxIter;
  Certificate certificate;
  double certified_value = 0.0;       // round_certificate output
  double res_primal = 0.0, res_dual = 0.0, res_gap = 0.0;
  long iterations = 0;
};

/// Compiles the requested relaxation, solves it, recovers the certificate and
/// the rigorous rounded value. Non-convergence is flagged via `status`, the
/// value is still recorded (certified_value stays rigorous regardless).
NuPlusEntry nu_plus_bound(const NonnegMatrix& a, const relax::RelaxationSpec& spec,
                          const conic::SolverOptions& options = {});

/// Every lower bound for one matrix plus the serialization fixed by the CLI
/// contract.
struct BoundReport {
  int m = 0, n = 0;
  double frobenius = 0.0;
  double nuclear = 0.0;
  std::map<int, double> nu_plus;                 // level -> value
  std::map<int, std::string> nu_plus_status;     // level -> solver status
  double certified_value = 0.0;
  int numerical_rank = 0;
  std::optional<int> rectangle_cover;
  std::map<std::string, double> lower_bounds;    // name -> bound on rank+
  int best_integer_bound = 0;
  bool weighted = false;

  nlohmann::ordered_json to_json() const;
};

BoundReport compute_bound_report(const NonnegMatrix& a, const relax::RelaxationSpec& spec,
                                 const conic::SolverOptions& options = {},
                                 const RectangleLimits& limits = {});

/// ceil(x - 1e-6): integer bound immune to solver noise just above an
/// integer, without giving up a unit on values just below one.
int best_integer_bound_from(double x);

nlohmann::ordered_json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

}  // namespace nnrank::bounds
