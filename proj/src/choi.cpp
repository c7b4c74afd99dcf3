#include "qchoi/choi.hpp"

#include "qchoi/kernels.hpp"

#include <Eigen/SVD>

namespace qchoi {

CyclicVector CyclicVector::make(CMatrix m, bool normalize) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("CyclicVector: matrix must be square and nonempty");
  if (normalize) {
    const double f = m.norm();
    if (f == 0.0) throw std::invalid_argument("CyclicVector: zero matrix");
    m /= f;
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(m.rows() - 1);
  if (smax == 0.0 || smin < 1e-10 * smax)
    throw std::invalid_argument("CyclicVector: not separating and cyclic (singular within tolerance)");
  CMatrix inv = m.partialPivLu().inverse();
  const double hs = m.norm();
  return CyclicVector(std::move(m), normalize, smax / smin, std::move(inv), hs);
}

CyclicVector CyclicVector::maximally_entangled(Index n) {
  return make(CMatrix::Identity(n, n), true);
}

BipartiteOperator CyclicVector::e0() const {
  const CVector j = embedded();
  return {dim(), dim(), j * j.adjoint()};
}

namespace {

ChoiFactors factors_for(const QuantumMap& phi, const CyclicVector& x0, bool predual) {
  if (phi.dim() != x0.dim()) throw std::invalid_argument("choi: x0 dimension mismatch");
  const Index n = phi.dim();
  const Index r = static_cast<Index>(phi.pairs().size());
  CMatrix u(n * n, r), v(n * n, r);
  for (Index t = 0; t < r; ++t) {
    const auto& p = phi.pairs()[t];
    const CMatrix& a = predual ? p.b : p.a;
    const CMatrix& b = predual ? p.a : p.b;
    u.col(t) = vec_J(a * x0.matrix());
    v.col(t) = vec_J(b.adjoint() * x0.matrix());
  }
  return {std::move(u), std::move(v)};
}

BipartiteOperator assemble(const ChoiFactors& f, Index n) {
  if (f.u.cols() == 0) return {n, n, CMatrix::Zero(n * n, n * n)};
  return {n, n, outer_accumulate(f.u, f.v)};
}

}  // namespace

ChoiFactors choi_C_factors(const QuantumMap& phi, const CyclicVector& x0) {
  return factors_for(phi, x0, false);
}

ChoiFactors choi_D_factors(const QuantumMap& phi, const CyclicVector& x0) {
  return factors_for(phi, x0, true);
}

BipartiteOperator choi_C(const QuantumMap& phi, const CyclicVector& x0) {
  return assemble(choi_C_factors(phi, x0), phi.dim());
}

BipartiteOperator choi_D(const QuantumMap& phi, const CyclicVector& x0) {
  return assemble(choi_D_factors(phi, x0), phi.dim());
}

BipartiteOperator tilde_apply(const QuantumMap& phi, const BipartiteOperator& x) {
  if (x.dim_second != phi.dim())
    throw std::invalid_argument("tilde_apply: block dimension mismatch");
  return apply_blockwise(x, [&phi](const CMatrix& b) { return map_apply(phi, b); });
}

BipartiteOperator tilde_predual(const QuantumMap& phi, const BipartiteOperator& rho) {
  return tilde_apply(map_predual(phi), rho);
}

Complex pair_trace(const BipartiteOperator& x, const BipartiteOperator& rho) {
  if (x.total() != rho.total()) throw std::invalid_argument("pair_trace: dimension mismatch");
  return (x.mat.transpose().cwiseProduct(rho.mat)).sum();
}

Reconstruction map_from_C(const BipartiteOperator& c, const CyclicVector& x0) {
  if (c.dim_second != x0.dim()) throw std::invalid_argument("map_from_C: dimension mismatch");
  QuantumMap psi = map_from_std_choi(c);
  // choi_C inverts through ad_{(x0^dag)^{ -1}}.
  const CMatrix w = x0.inverse().adjoint();  // (x0^dag)^{-1}
  QuantumMap phi = compose(psi, ad(w));
  return {std::move(phi), x0.condition()};
}

Reconstruction map_from_D(const BipartiteOperator& d, const CyclicVector& x0) {
  Reconstruction r = map_from_C(d, x0);
  return {map_predual(r.map), r.x0_condition};
}

}  // namespace qchoi
