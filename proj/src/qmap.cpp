#include "qchoi/qmap.hpp"

#include "qchoi/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qchoi {

QuantumMap::QuantumMap(Index dim, std::vector<KrausPair> pairs)
    : dim_(dim), pairs_(std::move(pairs)) {
  if (dim <= 0) throw std::invalid_argument("QuantumMap: nonpositive dimension");
  for (const auto& p : pairs_) {
    if (p.a.rows() != dim || p.a.cols() != dim || p.b.rows() != dim || p.b.cols() != dim)
      throw std::invalid_argument("QuantumMap: pair dimension mismatch");
  }
}

QuantumMap QuantumMap::with_cached_choi(CMatrix c) const {
  QuantumMap out(dim_, pairs_);
  out.cached_choi_ = std::move(c);
  return out;
}

CMatrix map_apply(const QuantumMap& phi, const CMatrix& x) {
  if (x.rows() != phi.dim() || x.cols() != phi.dim())
    throw std::invalid_argument("map_apply: argument dimension mismatch");
  CMatrix out = CMatrix::Zero(phi.dim(), phi.dim());
  for (const auto& p : phi.pairs()) out += p.a * x * p.b;
  return out;
}

QuantumMap map_predual(const QuantumMap& phi) {
  std::vector<KrausPair> swapped;
  swapped.reserve(phi.pairs().size());
  for (const auto& p : phi.pairs()) swapped.push_back({p.b, p.a});
  return {phi.dim(), std::move(swapped)};
}

ChoiFactors std_choi_factors(const QuantumMap& phi) {
  const Index n = phi.dim();
  const Index r = static_cast<Index>(phi.pairs().size());
  CMatrix u(n * n, r), v(n * n, r);
  for (Index t = 0; t < r; ++t) {
    u.col(t) = vec_J(phi.pairs()[t].a);
    v.col(t) = vec_J(phi.pairs()[t].b.adjoint());
  }
  return {std::move(u), std::move(v)};
}

BipartiteOperator std_choi(const QuantumMap& phi) {
  if (phi.cached_choi()) return BipartiteOperator(phi.dim(), phi.dim(), *phi.cached_choi());
  const Index n = phi.dim();
  if (phi.pairs().empty()) return {n, n, CMatrix::Zero(n * n, n * n)};
  auto f = std_choi_factors(phi);
  return {n, n, outer_accumulate(f.u, f.v)};
}

QuantumMap map_from_std_choi(const BipartiteOperator& c) {
  if (c.dim_first != c.dim_second)
    throw std::invalid_argument("map_from_std_choi: local dimensions differ");
  const Index n = c.dim_second;
  const double scale = max_abs(c.mat);
  std::vector<KrausPair> pairs;
  if (scale == 0.0) return QuantumMap(n, pairs).with_cached_choi(c.mat);

  if (c.hermitian()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c.mat);
    if (es.info() != Eigen::Success) throw std::runtime_error("map_from_std_choi: eigensolve failed");
    for (Index i = 0; i < n * n; ++i) {
      const double lam = es.eigenvalues()(i);
      if (std::abs(lam) <= kRankTol * scale) continue;
      CMatrix a = unvec_J(es.eigenvectors().col(i), n);
      pairs.push_back({a, lam * a.adjoint()});
    }
  } else {
    Eigen::JacobiSVD<CMatrix> svd(c.mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
      const double s = svd.singularValues()(i);
      if (s <= kRankTol * svd.singularValues()(0)) continue;
      CMatrix a = unvec_J(CVector(s * svd.matrixU().col(i)), n);
      CMatrix bh = unvec_J(CVector(svd.matrixV().col(i)), n);
      pairs.push_back({a, bh.adjoint()});
    }
  }
  return QuantumMap(n, std::move(pairs)).with_cached_choi(c.mat);
}

QuantumMap compose(const QuantumMap& phi, const QuantumMap& psi) {
  if (phi.dim() != psi.dim()) throw std::invalid_argument("compose: dimension mismatch");
  const Index n = phi.dim();
  std::vector<KrausPair> prod;
  prod.reserve(phi.pairs().size() * psi.pairs().size());
  for (const auto& p : phi.pairs())
    for (const auto& q : psi.pairs()) prod.push_back({p.a * q.a, q.b * p.b});
  QuantumMap out(n, std::move(prod));
  if (static_cast<Index>(out.pairs().size()) > n * n) out = map_from_std_choi(std_choi(out));
  return out;
}

QuantumMap map_add(const QuantumMap& phi, const QuantumMap& psi) {
  if (phi.dim() != psi.dim()) throw std::invalid_argument("map_add: dimension mismatch");
  std::vector<KrausPair> pairs = phi.pairs();
  pairs.insert(pairs.end(), psi.pairs().begin(), psi.pairs().end());
  return {phi.dim(), std::move(pairs)};
}

QuantumMap map_scale(const Complex& c, const QuantumMap& phi) {
  std::vector<KrausPair> pairs;
  pairs.reserve(phi.pairs().size());
  for (const auto& p : phi.pairs()) pairs.push_back({c * p.a, p.b});
  return {phi.dim(), std::move(pairs)};
}

QuantumMap map_sub(const QuantumMap& phi, const QuantumMap& psi) {
  return map_add(phi, map_scale(Complex(-1, 0), psi));
}

}  // namespace qchoi
