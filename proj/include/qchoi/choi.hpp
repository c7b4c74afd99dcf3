#pragma once

#include "qchoi/qmap.hpp"

namespace qchoi {

// A separating and cyclic vector for the left-multiplication action of the
// matrix algebra on its Hilbert-Schmidt space: at finite dimension, exactly
// an invertible n x n operator.  Construction rejects matrices whose
// smallest singular value falls below 1e-10 of the largest.
class CyclicVector {
 public:
  // `normalize` rescales to unit Frobenius norm.  The unnormalized form is
  // legitimate (the diagonal power family uses it); the rank-one projection
  // onto the vector then carries the explicit scale |x0|_F^2.
  static CyclicVector make(CMatrix m, bool normalize = true);

  // I / sqrt(n): the maximally entangled choice, whose generalized Choi
  // matrix is the standard one up to the 1/n scale.
  static CyclicVector maximally_entangled(Index n);

  Index dim() const { return mat_.rows(); }
  const CMatrix& matrix() const { return mat_; }
  const CMatrix& inverse() const { return inv_; }
  bool normalized() const { return normalized_; }
  double condition() const { return condition_; }
  double hs_norm() const { return hs_norm_; }

  // J(x0) and the rank-one E0 = J(x0) J(x0)^dag (scale |x0|^2 when the
  // vector is unnormalized).
  CVector embedded() const { return vec_J(mat_); }
  BipartiteOperator e0() const;

 private:
  CyclicVector(CMatrix m, bool normalized, double condition, CMatrix inv, double hs_norm)
      : mat_(std::move(m)), inv_(std::move(inv)), normalized_(normalized),
        condition_(condition), hs_norm_(hs_norm) {}

  CMatrix mat_;
  CMatrix inv_;
  bool normalized_;
  double condition_;
  double hs_norm_;
};

// Generalized Choi matrices relative to x0.
//
//   choi_C(phi) = (id (x) phi)((I (x) x0) Omega (I (x) x0^dag))
//               = std_choi(phi . ad_{x0^dag}),
//   choi_D(phi) = the same with the predual map.
//
// For phi = sum_t a_t . b_t both are assembled from rank-one factors:
// choi_C = sum_t J(a_t x0) J(b_t^dag x0)^dag.
BipartiteOperator choi_C(const QuantumMap& phi, const CyclicVector& x0);
BipartiteOperator choi_D(const QuantumMap& phi, const CyclicVector& x0);

// Factored forms (columns of u against columns of v); rank <= #pairs.
ChoiFactors choi_C_factors(const QuantumMap& phi, const CyclicVector& x0);
ChoiFactors choi_D_factors(const QuantumMap& phi, const CyclicVector& x0);

// The amplification id (x) phi and its predual, acting blockwise on the
// second factor.
BipartiteOperator tilde_apply(const QuantumMap& phi, const BipartiteOperator& x);
BipartiteOperator tilde_predual(const QuantumMap& phi, const BipartiteOperator& rho);

// Bilinear trace pairing <X, rho> = Tr(X rho); real to 1e-10 when both
// arguments are Hermitian.
Complex pair_trace(const BipartiteOperator& x, const BipartiteOperator& rho);

// Reconstruction of the map from either Choi matrix.  Conditioning of the
// inversion is governed by x0 and reported alongside the map.
struct Reconstruction {
  QuantumMap map;
  double x0_condition;
};
Reconstruction map_from_C(const BipartiteOperator& c, const CyclicVector& x0);
Reconstruction map_from_D(const BipartiteOperator& d, const CyclicVector& x0);

}  // namespace qchoi
