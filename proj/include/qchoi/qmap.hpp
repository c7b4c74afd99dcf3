#pragma once

#include "qchoi/types.hpp"

#include <optional>
#include <vector>

namespace qchoi {

// One elementary-operator term X -> a * X * b.
struct KrausPair {
  CMatrix a;
  CMatrix b;
};

// A linear map on n x n matrices, stored as a sum of elementary operators
// phi(X) = sum_i a_i X b_i.  Every linear map on a matrix algebra has this
// form, so the representation loses nothing; completely positive maps are
// the special case b_i = a_i^dag up to regrouping.
class QuantumMap {
 public:
  QuantumMap(Index dim, std::vector<KrausPair> pairs);

  Index dim() const { return dim_; }
  const std::vector<KrausPair>& pairs() const { return pairs_; }

  // Optional memoized standard Choi matrix; see std_choi().
  const std::optional<CMatrix>& cached_choi() const { return cached_choi_; }
  QuantumMap with_cached_choi(CMatrix c) const;

 private:
  Index dim_;
  std::vector<KrausPair> pairs_;
  std::optional<CMatrix> cached_choi_;
};

CMatrix map_apply(const QuantumMap& phi, const CMatrix& x);

// Trace-pairing transpose: Tr(phi(X) rho) = Tr(X phi_*(rho)).
QuantumMap map_predual(const QuantumMap& phi);

// Standard Choi matrix sum_ij e_ij (x) phi(e_ij).
BipartiteOperator std_choi(const QuantumMap& phi);

// Factored form of the standard Choi matrix: std_choi = U * V^dag with
// columns u_t = J(a_t), v_t = J(b_t^dag).
struct ChoiFactors {
  CMatrix u;
  CMatrix v;
};
ChoiFactors std_choi_factors(const QuantumMap& phi);

// Inverse of std_choi.  Hermitian input eigendecomposes into pairs
// (a_i, lambda_i a_i^dag) with real lambda_i; general input goes through an
// SVD.  The returned map carries the input as its cached Choi matrix.
QuantumMap map_from_std_choi(const BipartiteOperator& c);

// Composition phi . psi; the pair list is re-derived through the standard
// Choi matrix once the raw product list would exceed n^2 terms.
QuantumMap compose(const QuantumMap& phi, const QuantumMap& psi);

QuantumMap map_add(const QuantumMap& phi, const QuantumMap& psi);
QuantumMap map_scale(const Complex& c, const QuantumMap& phi);
QuantumMap map_sub(const QuantumMap& phi, const QuantumMap& psi);

}  // namespace qchoi
