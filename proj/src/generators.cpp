#include "qchoi/generators.hpp"

#include <cmath>

namespace qchoi {

namespace {
CMatrix unit(Index n, Index i, Index j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}
}  // namespace

QuantumMap identity_map(Index n) {
  return {n, {{CMatrix::Identity(n, n), CMatrix::Identity(n, n)}}};
}

QuantumMap zero_map(Index n) { return {n, {}}; }

QuantumMap transpose_map(Index n) {
  // X^t = sum_ij e_ij X e_ij.
  std::vector<KrausPair> pairs;
  pairs.reserve(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) pairs.push_back({unit(n, i, j), unit(n, i, j)});
  return {n, std::move(pairs)};
}

QuantumMap ad(const CMatrix& v) {
  if (v.rows() != v.cols()) throw std::invalid_argument("ad: matrix not square");
  return {v.rows(), {{v.adjoint(), v}}};
}

QuantumMap elementary(const CMatrix& m, const CMatrix& n) {
  if (m.rows() != m.cols() || n.rows() != n.cols() || m.rows() != n.rows())
    throw std::invalid_argument("elementary: matrices must be square of equal size");
  return {m.rows(), {{m, n}}};
}

QuantumMap witness_map(double t, Index n) {
  if (n < 2) throw std::invalid_argument("witness_map: dimension must be >= 2");
  std::vector<KrausPair> pairs;
  // t * Tr(X) I: e_is X e_si = X_ss e_ii.
  if (t != 0.0) {
    const double s = std::sqrt(std::abs(t));
    const Complex sgn = t > 0 ? Complex(1, 0) : Complex(0, 1);
    for (Index i = 0; i < n; ++i)
      for (Index ss = 0; ss < n; ++ss)
        pairs.push_back({s * sgn * unit(n, i, ss), s * sgn * unit(n, ss, i)});
  }
  // -X as (iI) X (iI).
  pairs.push_back({Complex(0, 1) * CMatrix::Identity(n, n), Complex(0, 1) * CMatrix::Identity(n, n)});
  return {n, std::move(pairs)};
}

QuantumMap choi3_map() {
  // Diagonal gain psi(X) = diag(2x00 + x22, 2x11 + x00, 2x22 + x11), then
  // subtract X.
  const Index n = 3;
  std::vector<KrausPair> pairs;
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) pairs.push_back({r2 * unit(n, i, i), r2 * unit(n, i, i)});
  pairs.push_back({unit(n, 0, 2), unit(n, 2, 0)});
  pairs.push_back({unit(n, 1, 0), unit(n, 0, 1)});
  pairs.push_back({unit(n, 2, 1), unit(n, 1, 2)});
  pairs.push_back({Complex(0, 1) * CMatrix::Identity(n, n), Complex(0, 1) * CMatrix::Identity(n, n)});
  return {n, std::move(pairs)};
}

QuantumMap depolarizing(double lambda, Index n) {
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("depolarizing: lambda outside [0,1]");
  std::vector<KrausPair> pairs;
  const double sl = std::sqrt(lambda);
  if (lambda > 0.0) pairs.push_back({sl * CMatrix::Identity(n, n), sl * CMatrix::Identity(n, n)});
  const double w = std::sqrt((1.0 - lambda) / static_cast<double>(n));
  if (w > 0.0)
    for (Index i = 0; i < n; ++i)
      for (Index ss = 0; ss < n; ++ss) pairs.push_back({w * unit(n, i, ss), w * unit(n, ss, i)});
  return {n, std::move(pairs)};
}

QuantumMap measure_prepare(Index n) {
  std::vector<KrausPair> pairs;
  pairs.reserve(n);
  for (Index i = 0; i < n; ++i) pairs.push_back({unit(n, i, i), unit(n, i, i)});
  return {n, std::move(pairs)};
}

BipartiteOperator isotropic_state(double fidelity, Index n) {
  if (fidelity < 0.0 || fidelity > 1.0) throw std::invalid_argument("isotropic_state: F outside [0,1]");
  const CVector w = omega_vec(n);
  const CMatrix pomega = (w * w.adjoint()) / static_cast<double>(n);
  const CMatrix rest = CMatrix::Identity(n * n, n * n) - pomega;
  CMatrix rho = fidelity * pomega + (1.0 - fidelity) / static_cast<double>(n * n - 1) * rest;
  return {n, n, std::move(rho)};
}

BipartiteOperator hs_random_state(Index d1, Index d2, Rng& rng) {
  const Index t = d1 * d2;
  CMatrix g = rng.cmatrix(t, t);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {d1, d2, std::move(rho)};
}

QuantumMap random_hermitian_preserving_map(Index n, Index terms, bool cp, Rng& rng) {
  QuantumMap out = zero_map(n);
  for (Index t = 0; t < terms; ++t) {
    double c = rng.gauss();
    if (cp) c = std::abs(c);
    const CMatrix g = rng.cmatrix(n, n);
    out = map_add(out, map_scale(Complex(c, 0), ad(g)));
  }
  return out;
}

QuantumMap random_map(Index n, Index terms, Rng& rng) {
  std::vector<KrausPair> pairs;
  pairs.reserve(terms);
  for (Index t = 0; t < terms; ++t) pairs.push_back({rng.cmatrix(n, n), rng.cmatrix(n, n)});
  return {n, std::move(pairs)};
}

}  // namespace qchoi
