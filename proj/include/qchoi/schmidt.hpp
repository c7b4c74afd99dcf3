#pragma once

#include "qchoi/positivity.hpp"

#include <optional>
#include <vector>

namespace qchoi {

// Schmidt decomposition of a vector on d1 (x) d2: v = sum_a s_a u_a (x) w_a
// with descending s_a.  The Schmidt rank equals the matrix rank of the
// d2 x d1 reshape.
struct SchmidtDecomposition {
  RVector singular_values;
  std::vector<CVector> left;   // in the first factor
  std::vector<CVector> right;  // in the second factor
  Index rank = 0;
};

SchmidtDecomposition schmidt_decompose(const CVector& v, Index d1, Index d2,
                                       double tol = kRankTol);
Index schmidt_rank(const CVector& v, Index d1, Index d2, double tol = kRankTol);

// Truncate to the top-k Schmidt terms and renormalize (zero stays zero).
CVector schmidt_truncate(const CVector& v, Index d1, Index d2, Index k);

// Throws NotAState unless rho is Hermitian, positive semidefinite and unit
// trace, each to `tol`.
void validate_state(const BipartiteOperator& rho, double tol = 1e-9);

// lambda_min(partial transpose) >= -tol.  At 2x2 and 2x3 this decides
// separability exactly and serves as the ground-truth oracle there.
bool ppt_check(const BipartiteOperator& rho, double tol = 1e-9);

// A Schmidt-number lower bound with its certificate: a k-positive map whose
// Choi matrix pairs negatively with the state, so SN(rho) >= k + 1.
struct SnWitness {
  Index k = 0;
  double pairing = 0.0;            // <std_choi(map), rho>, below -tol
  BipartiteOperator witness_op;    // block-positive operator realizing the pairing
  std::optional<QuantumMap> map;   // the witness map (square local dims only)
};

struct SnLowerResult {
  Index lower = 1;
  std::optional<SnWitness> witness;
};

// Lower-bound engine over an explicit witness library: the reduction family
// t Tr(.) I - X, transpose composites, and per-state optimized local
// rotations psi . ad_V from the bottom eigenvector of the amplified predual.
// Never claims completeness beyond the PPT-exact regimes.
SnLowerResult sn_lower(const BipartiteOperator& rho, const SeeSawConfig& cfg);

// rho ~= sum_i weights_i |v_i><v_i| with schmidt_rank(v_i) <= k.
struct SnDecomposition {
  std::vector<double> weights;
  std::vector<CVector> vectors;
  double residual = 0.0;  // trace-norm reconstruction error
};

// Heuristic decomposition search: eigenvector seeding, then greedy rank-k
// atoms against the residual with nonnegative reweighting and periodic atom
// polish.  Returns nothing rather than a false positive; the found gate is
// a trace-norm residual below 1e-6.
std::optional<SnDecomposition> sn_upper(const BipartiteOperator& rho, Index k,
                                        const SeeSawConfig& cfg);

struct SNBounds {
  Index lower = 1;
  std::optional<Index> upper;  // empty = Unknown
  bool upper_via_ppt_regime = false;
  std::optional<SnWitness> lower_witness;
  std::optional<SnDecomposition> upper_decomposition;
};

SNBounds sn_bounds(const BipartiteOperator& rho, const SeeSawConfig& cfg);

namespace detail {

// Autonne-Takagi factorization of a complex symmetric S = U diag(s) U^T with
// descending s >= 0 and unitary U, through the real embedding
// [[Re S, Im S], [Im S, -Re S]].
struct Takagi {
  CMatrix u;
  RVector values;
};
Takagi takagi(const CMatrix& s);

// Exact product-state decomposition of a separable two-qubit state (the
// concurrence construction): eigenvectors are rotated so every term has a
// vanishing spin-flip overlap, hence Schmidt rank one.  Returns nothing when
// the concurrence is positive.
std::optional<SnDecomposition> wootters_product_decomposition(const BipartiteOperator& rho);

// Nonnegative least squares on the normal equations: minimize
// x^T G x / 2 - b^T x over x >= 0, Lawson-Hanson active set.
RVector nnls(const Eigen::MatrixXd& gram, const RVector& b, double tol = 1e-12,
             int max_iter = 0);

}  // namespace detail

}  // namespace qchoi
