#include "qchoi/positivity.hpp"

#include "qchoi/kernels.hpp"
#include "qchoi/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <omp.h>

namespace qchoi {

void phase_fix(CVector& v) {
  Index best = 0;
  double mag = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > mag + 1e-15) {
      mag = a;
      best = i;
    }
  }
  if (mag <= 0.0) return;
  v *= std::conj(v(best)) / mag;
}

namespace {

// Swap the tensor factors: out[(k,i),(l,j)] = in[(i,k),(j,l)] with
// i, j < d1 and k, l < d2.
CMatrix swap_factors(const CMatrix& c, Index d1, Index d2) {
  CMatrix out(d1 * d2, d1 * d2);
  for (Index i = 0; i < d1; ++i)
    for (Index k = 0; k < d2; ++k)
      for (Index j = 0; j < d1; ++j)
        for (Index l = 0; l < d2; ++l) out(k * d1 + i, l * d1 + j) = c(i * d2 + k, j * d2 + l);
  return out;
}

CVector bottom_eigvec(const CMatrix& herm) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  if (es.info() != Eigen::Success) throw std::runtime_error("seesaw: eigensolve failed");
  CVector v = es.eigenvectors().col(0);
  phase_fix(v);
  return v;
}

// Truncate to the top-k singular triples and renormalize to unit Frobenius.
CMatrix rank_truncate(const CMatrix& x, Index k) {
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = std::min<Index>(k, svd.singularValues().size());
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < r; ++i)
    out += svd.singularValues()(i) * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
  const double norm = out.norm();
  if (norm > 0) out /= norm;
  return out;
}

double quadratic_value(const CMatrix& c, const CMatrix& x) {
  const CVector j = vec_J(x);
  return std::real(Complex(j.adjoint() * c * j));
}

// One see-saw run from a given start (x: d2 x d1).
SeeSawResult run_from(const CMatrix& c, const CMatrix& c_swapped, Index d1, Index d2, Index k,
                      const SeeSawConfig& cfg, CMatrix x_init) {
  // Split x = Xi H^dag with H orthonormal.
  Eigen::JacobiSVD<CMatrix> svd(x_init, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CMatrix xi(d2, k), h(d1, k);
  for (Index i = 0; i < k; ++i) {
    xi.col(i) = svd.singularValues()(i) * svd.matrixU().col(i);
    h.col(i) = svd.matrixV().col(i);
  }

  double prev = quadratic_value(c, xi * h.adjoint());
  int flat = 0;
  int sweep = 0;
  for (; sweep < cfg.max_iters; ++sweep) {
    {
      // Optimal Xi for fixed orthonormal H: v = (conj(H) (x) I) vec(Xi).
      const CMatrix hk = kron(h.conjugate(), CMatrix::Identity(d2, d2));
      const CMatrix m = hk.adjoint() * c * hk;
      CVector v = bottom_eigvec(m);
      xi = CMatrix(Eigen::Map<const CMatrix>(v.data(), d2, k));
    }
    {
      // Re-factor so Xi is orthonormal, absorbing R into H.
      Eigen::HouseholderQR<CMatrix> qr(xi);
      CMatrix q = qr.householderQ() * CMatrix::Identity(d2, k);
      CMatrix r = CMatrix(qr.matrixQR().topRows(k).triangularView<Eigen::Upper>());
      h = h * r.adjoint();
      xi = q;
      // Optimal H for fixed orthonormal Xi, through the factor-swapped form.
      const CMatrix xk = kron(xi, CMatrix::Identity(d1, d1));
      const CMatrix t = xk.adjoint() * c_swapped * xk;
      CVector v = bottom_eigvec(t);
      CMatrix hbar(Eigen::Map<const CMatrix>(v.data(), d1, k));
      h = hbar.conjugate();
    }
    {
      Eigen::HouseholderQR<CMatrix> qr(h);
      CMatrix q = qr.householderQ() * CMatrix::Identity(d1, k);
      CMatrix r = CMatrix(qr.matrixQR().topRows(k).triangularView<Eigen::Upper>());
      xi = xi * r.adjoint();
      h = q;
    }
    const double cur = quadratic_value(c, xi * h.adjoint());
    const bool done = (prev - cur < cfg.tol) && (++flat >= 3);
    if (prev - cur >= cfg.tol) flat = 0;
    prev = cur;
    if (done) break;
  }

  CMatrix x = xi * h.adjoint();
  const double norm = x.norm();
  if (norm > 0) x /= norm;
  return {quadratic_value(c, x), std::move(x), sweep};
}

}  // namespace

SeeSawResult seesaw_min_quadratic(const CMatrix& c, Index d1, Index d2, Index k,
                                  const SeeSawConfig& cfg,
                                  const std::vector<CMatrix>& extra_seeds) {
  if (k < 1 || k > std::min(d1, d2)) throw std::invalid_argument("seesaw: k outside [1, min(d1,d2)]");
  if (c.rows() != d1 * d2 || c.cols() != d1 * d2)
    throw std::invalid_argument("seesaw: form must be (d1*d2)^2");

  const CMatrix ch = 0.5 * (c + CMatrix(c.adjoint()));
  const CMatrix cs = swap_factors(ch, d1, d2);

  std::vector<CMatrix> seeds;
  {
    // Deterministic spectral seed; exact when k = min(d1,d2).
    CVector v = bottom_eigvec(ch);
    seeds.push_back(rank_truncate(unvec_bipartite(v, d1, d2), k));
  }
  for (const auto& s : extra_seeds) seeds.push_back(rank_truncate(s, k));

  const int total = static_cast<int>(seeds.size()) + cfg.restarts;
  std::vector<SeeSawResult> results(total);
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < total; ++idx) {
    CMatrix start;
    if (idx < static_cast<int>(seeds.size())) {
      start = seeds[idx];
    } else {
      Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(idx));
      CMatrix gx = rng.cmatrix(d2, k);
      CMatrix gh = rng.cmatrix(d1, k);
      start = gx * gh.adjoint();
      const double norm = start.norm();
      start = (norm > 0) ? CMatrix(start / norm)
                         : rank_truncate(CMatrix::Identity(d2, d1), k);
    }
    results[idx] = run_from(ch, cs, d1, d2, k, cfg, std::move(start));
  }

  int best = 0;
  for (int i = 1; i < total; ++i)
    if (results[i].value < results[best].value) best = i;
  return results[best];
}

Complex qform_blockwise(const QuantumMap& phi, const CyclicVector& x0, const CMatrix& x) {
  const Index n = phi.dim();
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Index k = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 0) k = i + 1;
  if (k == 0) return 0.0;

  CVector xi(k * n), eta(k * n);
  for (Index i = 0; i < k; ++i) {
    xi.segment(i * n, n) = svd.singularValues()(i) * svd.matrixU().col(i);
    eta.segment(i * n, n) = x0.matrix() * svd.matrixV().col(i);
  }
  const CMatrix outer = eta * eta.adjoint();
  const BipartiteOperator amplified = tilde_apply(phi, BipartiteOperator(k, n, outer));
  return Complex(xi.adjoint() * amplified.mat * xi);
}

CpResult is_cp(const QuantumMap& phi, const CyclicVector& x0, double tol) {
  const BipartiteOperator c = choi_C(phi, x0);
  const BipartiteOperator d = choi_D(phi, x0);
  const bool herm = c.hermitian();
  const CMatrix ch = 0.5 * (c.mat + CMatrix(c.mat.adjoint()));
  const CMatrix dh = 0.5 * (d.mat + CMatrix(d.mat.adjoint()));
  Eigen::SelfAdjointEigenSolver<CMatrix> ec(ch, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<CMatrix> ed(dh, Eigen::EigenvaluesOnly);
  const double lc = ec.eigenvalues()(0);
  const double ld = ed.eigenvalues()(0);
  return {herm && lc >= -tol, lc, ld};
}

std::vector<CMatrix> kraus(const QuantumMap& phi, double tol) {
  const BipartiteOperator c = std_choi(phi);
  if (!c.hermitian()) throw NotCompletelyPositive("kraus: Choi matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (c.mat + CMatrix(c.mat.adjoint())));
  const double scale = std::max(1.0, std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
  if (es.eigenvalues()(0) < -tol * scale)
    throw NotCompletelyPositive("kraus: Choi eigenvalue below -tol");
  std::vector<CMatrix> out;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam <= kRankTol * scale) continue;
    CVector v = es.eigenvectors().col(i);
    phase_fix(v);
    out.push_back(unvec_J(CVector(std::sqrt(lam) * v), phi.dim()).adjoint());
  }
  return out;
}

Verdict is_k_positive(const QuantumMap& phi, Index k, const CyclicVector& x0,
                      const SeeSawConfig& cfg) {
  if (k < 1 || k > phi.dim()) throw std::invalid_argument("is_k_positive: invalid k");
  const Index n = phi.dim();
  const BipartiteOperator c = choi_C(phi, x0);
  SeeSawResult r = seesaw_min_quadratic(c.mat, n, n, k, cfg);

  Verdict v;
  v.budget = cfg;
  // Recompute the achieved value through the amplification route; the two
  // evaluations agree to 1e-12 on well-scaled inputs.
  v.achieved_min = std::real(qform_blockwise(phi, x0, r.minimizer));
  if (r.value < -cfg.tol) {
    v.status = VerdictStatus::Violated;
    CVector w = vec_J(r.minimizer);
    const double norm = w.norm();
    if (norm > 0) w /= norm;
    v.witness = std::move(w);
  }
  return v;
}

Verdict is_positive(const QuantumMap& phi, const CyclicVector& x0, const SeeSawConfig& cfg) {
  return is_k_positive(phi, 1, x0, cfg);
}

}  // namespace qchoi
