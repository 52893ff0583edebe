#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "nnrank/certificate.hpp"
#include "nnrank/conic_solver.hpp"
#include "nnrank/dense_matrix.hpp"

namespace nnrank::relax {

enum class SymmetricReduction { Auto, On, Off };

/// Which relaxation of the copositive program to compile.
struct RelaxationSpec {
  int level = 0;
  std::optional<std::pair<SymWeight, SymWeight>> weights;  // (P, Q)
  SymmetricReduction reduction = SymmetricReduction::Auto;
  int gram_cap = 400;  // largest admissible SOS Gram side for local solves
};

/// Witness for the trace-minimization side: [[X, A], [A^T, Y]] is doubly
/// nonnegative within solver tolerance and the relaxation value equals
/// (trace(P X) + trace(Q Y)) / 2.
struct CpWitness {
  DenseMatrix x;
  DenseMatrix y;
};

enum class RelaxationForm { Level0Full, Level0Reduced, LevelK, NuclearPair };

/// A compiled relaxation: the standard-form cone program plus the index maps
/// needed to read the optimum, the dual matrix W and certificates back out.
struct Relaxation {
  RelaxationForm form = RelaxationForm::Level0Full;
  int m = 0;
  int n = 0;
  int level = 0;
  std::optional<std::pair<DenseMatrix, DenseMatrix>> weights;  // (P, Q) dense

  conic::ConicProblem problem;
  double objective_sign = 1.0;  // relaxation value = sign * primal objective

  // variable offsets (meaning depends on form)
  int var_w = -1;       // free W block (Level0Full, LevelK)
  int var_nonneg = -1;  // svec nonneg block (Level0Full) / X block (Level0Reduced)
  int var_psd = -1;     // svec PSD block (Level0Full, NuclearPair), Gram block (LevelK)
  int var_psd2 = -1;    // second PSD block (Level0Reduced)
  int gram_side = 0;    // LevelK

  // constraint-row offsets
  int rows_p = 0;       // diagonal P-block rows (Level0Full)
  int rows_q = 0;       // diagonal Q-block rows (Level0Full)
  int rows_cross = 0;   // off-diagonal-block rows (Level0Full, NuclearPair)
  int rows_r2 = 0;      // second row family (Level0Reduced)

  double value(const conic::ConicSolution& sol) const;

  /// The dual/optimal W of the corresponding maximization program.
  DenseMatrix recover_w(const conic::ConicSolution& sol) const;

  bounds::Certificate recover_certificate(const conic::ConicSolution& sol) const;

  /// Trace-program witness (level-0 forms only).
  std::optional<CpWitness> recover_cp_witness(const conic::ConicSolution& sol) const;
};

/// Level-0 relaxation in split form: variables W free, nonneg part, PSD part,
/// one equality per upper-triangle entry of [[P,-W],[-W^T,Q]]. Maximizes
/// <A, W>.
Relaxation build_level0(const NonnegMatrix& a,
                        const std::optional<std::pair<SymWeight, SymWeight>>& weights = {});

/// Size-reduced level-0 program for symmetric A (two PSD blocks of side n
/// instead of one of side 2n): minimize trace(P X) s.t. X - A and X + A PSD,
/// X entrywise nonnegative. Weights require P == Q.
Relaxation build_symmetric_reduced(
    const NonnegMatrix& a,
    const std::optional<std::pair<SymWeight, SymWeight>>& weights = {});

/// Order-k sum-of-squares relaxation (k >= 1): one PSD Gram block over the
/// monomials of total degree exactly k+2 in m+n variables, with one equality
/// per monomial of degree 2k+4 matching the coefficients of
/// (sum x_i^2)^k * sum_ij M_ij x_i^2 x_j^2, M = [[P,-W],[-W^T,Q]].
Relaxation build_levelk(const NonnegMatrix& a, int k,
                        const std::optional<std::pair<SymWeight, SymWeight>>& weights = {},
                        int gram_cap = 400);

/// Dispatches on the spec (auto reduction engages for square A with
/// ||A - A^T||_F <= 1e-10 ||A||_F and, when weighted, P == Q).
Relaxation build_relaxation(const NonnegMatrix& a, const RelaxationSpec& spec);

/// Trace-vs-spectral-norm SDP pair whose value is the plain nuclear norm;
/// solver sanity baseline. W is recovered from the duals.
Relaxation build_nuclear_pair(const DenseMatrix& a);

/// Number of degree-(k+2) monomials in nvars variables (the Gram side).
long gram_dimension(int nvars, int k);

/// Writes the problem in SDPA sparse ".dat-s" form: constraint count, block
/// count, block sizes (negative = diagonal block), the rhs vector, then
/// "matno blkno i j value" quintuples with matno 0 the objective, upper
/// triangle only, 17 significant digits. Free variables are split into
/// plus/minus halves of a diagonal block. The optimal value of the exported
/// problem equals -(primal optimum) of `p`, i.e. the relaxation value for
/// max-form compilations.
void export_sdpa(const conic::ConicProblem& p, const std::filesystem::path& path,
                 const std::string& comment = "");
void export_sdpa(const conic::ConicProblem& p, std::ostream& out,
                 const std::string& comment = "");

/// Debug reader for the exporter's output (round-trip checks).
struct SdpaData {
  int num_constraints = 0;
  std::vector<int> block_sizes;  // negative = diagonal block
  std::vector<double> rhs;
  struct Entry {
    int matno, blkno, i, j;
    double value;
  };
  std::vector<Entry> entries;
};

SdpaData parse_sdpa(const std::filesystem::path& path);

}  // namespace nnrank::relax
