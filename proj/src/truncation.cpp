#include "qchoi/truncation.hpp"

#include "qchoi/generators.hpp"
#include "qchoi/kernels.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qchoi {

Subspace Subspace::from_basis(CMatrix basis) {
  if (basis.cols() == 0 || basis.rows() < basis.cols())
    throw std::invalid_argument("Subspace: need 1 <= d <= N columns");
  const CMatrix gram = basis.adjoint() * basis;
  if (max_abs(gram - CMatrix::Identity(basis.cols(), basis.cols())) > 1e-12)
    throw std::invalid_argument("Subspace: basis not orthonormal to 1e-12");
  return Subspace(std::move(basis));
}

Subspace Subspace::standard(Index ambient, Index d) {
  return Subspace(CMatrix::Identity(ambient, ambient).leftCols(d));
}

Subspace Subspace::random(Index ambient, Index d, Rng& rng) {
  return Subspace(rng.unitary(ambient).leftCols(d));
}

namespace {

// QR with the R diagonal rotated positive: the Gram-Schmidt basis of the
// columns in their given order, deterministically.
CMatrix orthonormalize_in_order(const CMatrix& a) {
  const Index d = a.cols();
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(a.rows(), d);
  for (Index i = 0; i < d; ++i) {
    const Complex r = qr.matrixQR()(i, i);
    const double m = std::abs(r);
    if (m > 0) q.col(i) *= r / m;
  }
  return q;
}

}  // namespace

Compression::Compression(const Subspace& f, const CyclicVector& x0) {
  if (f.ambient() != x0.dim()) throw std::invalid_argument("Compression: ambient mismatch");
  domain_basis = f.basis();
  range_basis = orthonormalize_in_order(x0.matrix() * domain_basis);
  lambda = kron(domain_basis.conjugate(), range_basis);
}

CMatrix iota(const CMatrix& y, const Compression& c) {
  if (y.rows() != c.domain_basis.cols() || y.cols() != y.rows())
    throw std::invalid_argument("iota: argument is not d x d");
  return c.range_basis * y * c.domain_basis.adjoint();
}

CMatrix pi(const CMatrix& x, const Compression& c) {
  if (x.rows() != c.domain_basis.rows() || x.cols() != x.rows())
    throw std::invalid_argument("pi: argument is not N x N");
  return c.range_basis.adjoint() * x * c.domain_basis;
}

BipartiteOperator compress(const BipartiteOperator& x, const Compression& c) {
  const Index ambient = c.domain_basis.rows();
  if (x.total() != ambient * ambient)
    throw std::invalid_argument("compress: operator is not N^2 x N^2");
  const Index d = c.domain_basis.cols();
  return {d, d, CMatrix(c.lambda.adjoint() * x.mat * c.lambda)};
}

CyclicVector diag_cyclic(Index ambient, double p, bool normalized) {
  if (ambient < 1) throw std::invalid_argument("diag_cyclic: N must be >= 1");
  if (p <= 0.0) throw std::invalid_argument("diag_cyclic: p must be > 0");
  CMatrix m = CMatrix::Zero(ambient, ambient);
  for (Index i = 0; i < ambient; ++i)
    m(i, i) = std::pow(static_cast<double>(i + 1), -(1.0 + p) / 2.0);
  return CyclicVector::make(std::move(m), normalized);
}

namespace {

double op_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// Largest entry of std_choi(delta) without forming it when the pair list is
// a single term.
double max_unit_entry_gap(const QuantumMap& delta) {
  const auto f = std_choi_factors(delta);
  if (f.u.cols() == 0) return 0.0;
  if (f.u.cols() == 1)
    return f.u.col(0).cwiseAbs().maxCoeff() * f.v.col(0).cwiseAbs().maxCoeff();
  return max_abs(outer_accumulate(f.u, f.v));
}

// max_s max_ij |Tr(delta(e_ij) T_s)| through the factored Choi form:
// Tr((a e_ij b) T) = (b T a)_{ji}.
double weakstar_gap(const QuantumMap& delta, const std::vector<CMatrix>& test_ops) {
  double worst = 0.0;
  for (const auto& t : test_ops) {
    CMatrix g = CMatrix::Zero(delta.dim(), delta.dim());
    for (const auto& p : delta.pairs()) g += (p.b * t * p.a).transpose();
    worst = std::max(worst, max_abs(g));
  }
  return worst;
}

QuantumMap family_member(const ConvergenceFamily& family, const CyclicVector& x0, int m) {
  switch (family.kind) {
    case ConvergenceFamily::Kind::AdSeq: {
      const Index n = x0.dim();
      CMatrix v = CMatrix::Zero(n, n);
      v(m - 1, m - 1) = std::pow(static_cast<double>(m), (1.0 + family.eps) / 2.0);
      return ad(v);
    }
    case ConvergenceFamily::Kind::Constant:
      return family.maps.at(0);
    case ConvergenceFamily::Kind::Interpolation:
      return map_scale(Complex(1.0 - 1.0 / static_cast<double>(m), 0), family.maps.at(0));
    case ConvergenceFamily::Kind::List:
      return family.maps.at(static_cast<size_t>(m - 1));
  }
  throw std::invalid_argument("convergence_run: unknown family kind");
}

QuantumMap family_target(const ConvergenceFamily& family, const CyclicVector& x0) {
  switch (family.kind) {
    case ConvergenceFamily::Kind::AdSeq:
      return zero_map(x0.dim());
    case ConvergenceFamily::Kind::Constant:
    case ConvergenceFamily::Kind::Interpolation:
      return family.maps.at(0);
    case ConvergenceFamily::Kind::List:
      return family.maps.back();
  }
  throw std::invalid_argument("convergence_run: unknown family kind");
}

}  // namespace

std::vector<ConvergenceRow> convergence_run(const ConvergenceFamily& family,
                                            const CyclicVector& x0, Index test_set,
                                            std::uint64_t seed) {
  const Index n = x0.dim();
  int steps = family.steps;
  if (family.kind == ConvergenceFamily::Kind::AdSeq) steps = static_cast<int>(n);
  if (family.kind == ConvergenceFamily::Kind::List) steps = static_cast<int>(family.maps.size());
  if (steps < 1) throw std::invalid_argument("convergence_run: empty family");
  for (const auto& m : family.maps)
    if (m.dim() != n) throw std::invalid_argument("convergence_run: family dimension mismatch");

  // Seeded trace-class test set (unit trace norm).
  Rng rng(seed ^ 0x7ace5e7ULL);
  std::vector<CMatrix> test_ops;
  for (Index s = 0; s < test_set; ++s) {
    CMatrix t = rng.cmatrix(n, n);
    Eigen::JacobiSVD<CMatrix> svd(t);
    const double tn = svd.singularValues().sum();
    if (tn > 0) t /= tn;
    test_ops.push_back(std::move(t));
  }

  const QuantumMap target = family_target(family, x0);
  const double target_cb = op_norm(map_apply(target, CMatrix::Identity(n, n)));
  const double bound = 8.0 * (1.0 + target_cb);

  std::vector<ConvergenceRow> rows(steps);
#pragma omp parallel for schedule(dynamic)
  for (int m = 1; m <= steps; ++m) {
    const QuantumMap phi_m = family_member(family, x0, m);
    const QuantumMap delta = map_sub(phi_m, target);
    ConvergenceRow row;
    row.m = m;
    row.cb_proxy = op_norm(map_apply(phi_m, CMatrix::Identity(n, n)));
    row.dnorm = d_norm(phi_m, x0).value;
    row.dnorm_gap = d_norm(delta, x0).value;
    row.max_unit_gap = max_unit_entry_gap(delta);
    row.weakstar_gap = weakstar_gap(delta, test_ops);
    rows[static_cast<size_t>(m - 1)] = row;
  }
  double sup = 0.0;
  for (auto& row : rows) {
    sup = std::max(sup, row.cb_proxy);
    row.uniformly_bounded = sup <= bound;
  }
  return rows;
}

std::string convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "# m cb_proxy dnorm dnorm_gap max_unit_gap weakstar_gap uniformly_bounded\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d %.17g %.17g %.17g %.17g %.17g %d\n", r.m, r.cb_proxy,
                  r.dnorm, r.dnorm_gap, r.max_unit_gap, r.weakstar_gap,
                  r.uniformly_bounded ? 1 : 0);
    os << buf;
  }
  return os.str();
}

}  // namespace qchoi
