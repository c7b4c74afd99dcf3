#pragma once

#include "qchoi/choi.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qchoi {

struct SeeSawConfig {
  int restarts = 32;
  int max_iters = 200;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

enum class VerdictStatus { Violated, NoViolationFound };

// Outcome of a cone-membership test.  A Violated verdict is a certificate
// (the witness vector evaluates the quadratic form below -tol); a
// NoViolationFound verdict is not a proof of membership, it reports the best
// value the search budget reached.
struct Verdict {
  VerdictStatus status = VerdictStatus::NoViolationFound;
  std::optional<CVector> witness;  // unit vector in K (x) K, present iff Violated
  double achieved_min = 0.0;
  SeeSawConfig budget;

  bool violated() const { return status == VerdictStatus::Violated; }
};

// Rotate so the largest-modulus entry is real positive (first index wins
// ties); keeps eigenvector-derived output reproducible.
void phase_fix(CVector& v);

// Minimize <v| C |v> over unit vectors v on d1 (x) d2 of Schmidt rank <= k,
// parameterized through the d2 x d1 reshape x = Xi * H^dag, by alternating
// minimal-eigenvector solves.  One deterministic restart is seeded from the
// bottom eigenvector of C (rank-truncated), the rest from per-restart
// Gaussian streams; results merge by (value, restart index), so runs are
// reproducible.  On K (x) K the minimizer is the x of the J identification.
struct SeeSawResult {
  double value = 0.0;
  CMatrix minimizer;  // d2 x d1, unit HS norm, rank <= k
  int sweeps = 0;
};
SeeSawResult seesaw_min_quadratic(const CMatrix& c, Index d1, Index d2, Index k,
                                  const SeeSawConfig& cfg,
                                  const std::vector<CMatrix>& extra_seeds = {});

// Independent evaluation of <C_phi, omega_{x,x}> that never forms the Choi
// matrix: SVD x into sum_i xi_i (x) eta_i, then
// ((id_k (x) phi)(eta eta^dag) xi | xi) with xi = sum e_i (x) xi_i and
// eta = sum e_i (x) x0 eta_i.
Complex qform_blockwise(const QuantumMap& phi, const CyclicVector& x0, const CMatrix& x);

struct CpResult {
  bool cp = false;
  double min_eig = 0.0;    // smallest eigenvalue of choi_C (Hermitian part)
  double min_eig_D = 0.0;  // same for choi_D; verdicts agree by duality
};
CpResult is_cp(const QuantumMap& phi, const CyclicVector& x0, double tol = 1e-9);

// Kraus operators of a completely positive map: phi(X) = sum V_i^dag X V_i,
// from the eigendecomposition of the standard Choi matrix.  Throws
// NotCompletelyPositive when an eigenvalue sits below -tol.
std::vector<CMatrix> kraus(const QuantumMap& phi, double tol = 1e-9);

// Rank-constrained positivity tests.  A Violated verdict disproves
// k-positivity regardless of x0; NoViolationFound is heuristic.
Verdict is_k_positive(const QuantumMap& phi, Index k, const CyclicVector& x0,
                      const SeeSawConfig& cfg);
Verdict is_positive(const QuantumMap& phi, const CyclicVector& x0, const SeeSawConfig& cfg);

}  // namespace qchoi
