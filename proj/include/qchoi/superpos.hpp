#pragma once

#include "qchoi/schmidt.hpp"

namespace qchoi {

// Trace norm of choi_D(phi, x0); a norm on maps (zero exactly for the zero
// map), with a value that depends on the chosen cyclic vector.
struct DNormValue {
  double value = 0.0;
  CMatrix x0;  // the cyclic vector the value refers to
  bool x0_normalized = true;
};

DNormValue d_norm(const QuantumMap& phi, const CyclicVector& x0);

enum class SuperposStatus { Yes, No, Unknown };

// Verdict for k-superpositivity / k-partial entanglement breaking.  Yes
// carries a constructive certificate (phi = sum ad(V_i) with rank V_i <= k,
// verified on matrix units); No carries a k-positive witness map whose
// Choi matrix pairs negatively with choi_D(phi, x0).  Unknown reports the
// gap rather than rounding it away.
struct SuperposVerdict {
  SuperposStatus status = SuperposStatus::Unknown;
  Index k = 1;
  std::vector<CMatrix> kraus_rank_k;
  double reconstruction_error = 0.0;
  std::optional<SnWitness> witness;
  double witness_pairing = 0.0;  // pair(choi_C(witness, x0), choi_D(phi, x0))
  Index sn_lower_bound = 1;
  int sampled_violations = 0;  // entanglement-breaking sampled check only
};

SuperposVerdict is_k_superpositive(const QuantumMap& phi, Index k, const CyclicVector& x0,
                                   const SeeSawConfig& cfg);

// k = 1 plus a sampled check that the amplified predual sends 50 seeded pure
// states to states that pass the separability screen.
SuperposVerdict is_entanglement_breaking(const QuantumMap& phi, const CyclicVector& x0,
                                         const SeeSawConfig& cfg);

// Rank-one Kraus operators of an entanglement breaking map, or nothing when
// the decomposition search fails.
std::optional<std::vector<CMatrix>> eb_kraus_rank_one(const QuantumMap& phi,
                                                      const CyclicVector& x0,
                                                      const SeeSawConfig& cfg);

}  // namespace qchoi
