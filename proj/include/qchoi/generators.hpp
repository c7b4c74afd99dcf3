#pragma once

#include "qchoi/qmap.hpp"
#include "qchoi/rng.hpp"

namespace qchoi {

// Built-in map and state families used by the tests, the witness engine and
// the CLI `gen` subcommand.

QuantumMap identity_map(Index n);
QuantumMap transpose_map(Index n);
QuantumMap zero_map(Index n);

// ad_v(X) = V^dag X V.
QuantumMap ad(const CMatrix& v);

// phi_{M,N}(X) = M X N.
QuantumMap elementary(const CMatrix& m, const CMatrix& n);

// phi_t(X) = t * Tr(X) I - X.  k-positive exactly for t >= k.
QuantumMap witness_map(double t, Index n);

// The Choi map on M_3: positive but not 2-positive.
QuantumMap choi3_map();

// lambda * id + (1 - lambda) * Tr(.) I / n.
QuantumMap depolarizing(double lambda, Index n);

// X -> sum_i Tr(X e_ii) e_ii; measure in the standard basis and re-prepare.
QuantumMap measure_prepare(Index n);

// rho_F = F P_omega + (1 - F)(I - P_omega)/(n^2 - 1), unit trace.
BipartiteOperator isotropic_state(double fidelity, Index n);

// Hilbert-Schmidt ensemble state on d1 (x) d2.
BipartiteOperator hs_random_state(Index d1, Index d2, Rng& rng);

// Random Hermiticity-preserving map sum_i c_i ad(G_i) with real c_i; all
// coefficients positive when `cp` is set.
QuantumMap random_hermitian_preserving_map(Index n, Index terms, bool cp, Rng& rng);

// Random map with unconstrained pair entries.
QuantumMap random_map(Index n, Index terms, Rng& rng);

}  // namespace qchoi
