#include "qchoi/schmidt.hpp"

#include "qchoi/generators.hpp"
#include "qchoi/kernels.hpp"
#include "qchoi/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace qchoi {

namespace {

double trace_norm_hermitian(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + CMatrix(m.adjoint())),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

SchmidtDecomposition schmidt_decompose(const CVector& v, Index d1, Index d2, double tol) {
  const CMatrix m = unvec_bipartite(v, d1, d2);  // d2 x d1, v = sum m(k,i) e_i (x) e_k
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  for (Index a = 0; a < out.singular_values.size(); ++a) {
    // m = sum_a s_a p_a q_a^dag => v = sum_a s_a conj(q_a) (x) p_a.
    out.right.push_back(svd.matrixU().col(a));
    out.left.push_back(svd.matrixV().col(a).conjugate());
    if (smax > 0.0 && out.singular_values(a) > tol * smax) out.rank = a + 1;
  }
  return out;
}

Index schmidt_rank(const CVector& v, Index d1, Index d2, double tol) {
  if (v.size() == 0 || v.norm() == 0.0) return 0;
  return schmidt_decompose(v, d1, d2, tol).rank;
}

CVector schmidt_truncate(const CVector& v, Index d1, Index d2, Index k) {
  const CMatrix m = unvec_bipartite(v, d1, d2);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CMatrix t = CMatrix::Zero(d2, d1);
  const Index r = std::min<Index>(k, svd.singularValues().size());
  for (Index a = 0; a < r; ++a)
    t += svd.singularValues()(a) * svd.matrixU().col(a) * svd.matrixV().col(a).adjoint();
  const double norm = t.norm();
  if (norm > 0) t /= norm;
  return vec_J(t);
}

void validate_state(const BipartiteOperator& rho, double tol) {
  if (!rho.hermitian()) throw NotAState("state is not Hermitian within tolerance");
  const double tr = rho.mat.trace().real();
  if (std::abs(tr - 1.0) > tol) throw NotAState("state trace differs from 1 beyond tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.mat, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -tol) throw NotAState("state has an eigenvalue below -tol");
}

bool ppt_check(const BipartiteOperator& rho, double tol) {
  validate_state(rho, tol);
  const BipartiteOperator pt = partial_transpose(rho, Side::First);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (pt.mat + CMatrix(pt.mat.adjoint())),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= -tol;
}

namespace detail {

Takagi takagi(const CMatrix& s_in) {
  const Index r = s_in.rows();
  if (s_in.cols() != r) throw std::invalid_argument("takagi: matrix not square");
  const CMatrix s = 0.5 * (s_in + CMatrix(s_in.transpose()));

  Eigen::MatrixXd m(2 * r, 2 * r);
  m.topLeftCorner(r, r) = s.real();
  m.topRightCorner(r, r) = s.imag();
  m.bottomLeftCorner(r, r) = s.imag();
  m.bottomRightCorner(r, r) = -s.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("takagi: eigensolve failed");

  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  const double cut = 1e-13 * scale;

  Takagi out;
  out.u = CMatrix(r, r);
  out.values = RVector::Zero(r);
  Index col = 0;
  // Eigenvalues ascend; positive singular values sit at the top, descending.
  for (Index i = 2 * r - 1; i >= 0 && col < r; --i) {
    const double sigma = es.eigenvalues()(i);
    if (sigma <= cut) break;
    const Eigen::VectorXd re = es.eigenvectors().col(i).head(r);
    const Eigen::VectorXd im = es.eigenvectors().col(i).tail(r);
    CVector w = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
    // Re-orthogonalize against earlier columns; coefficients are O(eps) so
    // the Takagi relation survives.
    for (Index j = 0; j < col; ++j) w -= (out.u.col(j).adjoint() * w)(0) * out.u.col(j);
    const double norm = w.norm();
    if (norm < 1e-12) continue;
    out.u.col(col) = w / norm;
    out.values(col) = sigma;
    ++col;
  }
  // Complete the kernel columns to a unitary.
  if (col < r) {
    CMatrix base = CMatrix::Identity(r, r);
    Index filled = col;
    for (Index cand = 0; cand < r && filled < r; ++cand) {
      CVector w = base.col(cand);
      for (Index j = 0; j < filled; ++j) w -= (out.u.col(j).adjoint() * w)(0) * out.u.col(j);
      const double norm = w.norm();
      if (norm < 1e-6) continue;
      out.u.col(filled) = w / norm;
      ++filled;
    }
    if (filled < r) throw std::runtime_error("takagi: unitary completion failed");
  }
  return out;
}

std::optional<SnDecomposition> wootters_product_decomposition(const BipartiteOperator& rho) {
  if (rho.dim_first != 2 || rho.dim_second != 2)
    throw std::invalid_argument("wootters: requires 2 (x) 2");

  // Spin-flip sigma_y (x) sigma_y in the product basis: real symmetric.
  Eigen::Matrix4d yy = Eigen::Matrix4d::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  const CMatrix flip = yy.cast<Complex>();

  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.mat);
  std::vector<CVector> sub;  // subnormalized eigenvectors, descending weight
  for (Index i = 3; i >= 0; --i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-14) sub.push_back(std::sqrt(lam) * es.eigenvectors().col(i));
  }
  const Index r = static_cast<Index>(sub.size());
  if (r == 0) return std::nullopt;

  CMatrix tau(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) tau(i, j) = (sub[i].adjoint() * flip * sub[j].conjugate())(0);

  const Takagi tk = takagi(tau);
  double lam[4] = {0, 0, 0, 0};
  for (Index i = 0; i < r; ++i) lam[i] = tk.values(i);
  const double conc = lam[0] - lam[1] - lam[2] - lam[3];
  if (conc > 1e-9) return std::nullopt;  // entangled, no product decomposition

  // x_i = sum_j conj(U_ji) v_j diagonalizes the flip overlaps.
  std::vector<CVector> x(4, CVector::Zero(4));
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) x[i] += std::conj(tk.u(j, i)) * sub[j];

  // Unit phases q with lam1 q1 + lam2 q2 + (lam3 + lam4) q3 = 0.
  Complex q[4] = {1.0, 1.0, 1.0, 1.0};
  const double a = lam[0], b = lam[1], c = lam[2] + lam[3];
  if (a > 1e-14) {
    if (c < 1e-14 * a) {
      q[1] = -1.0;  // requires a ~= b, i.e. zero concurrence at rank <= 2
    } else {
      double ca = (c * c - a * a - b * b) / (2.0 * a * b);
      ca = std::clamp(ca, -1.0, 1.0);
      q[1] = Complex(ca, std::sqrt(std::max(0.0, 1.0 - ca * ca)));
      Complex q3 = (-a - b * q[1]) / c;
      q[2] = q3 / std::abs(q3);
    }
    q[3] = q[2];
  }

  Complex phase[4];
  for (int j = 0; j < 4; ++j) phase[j] = std::exp(Complex(0, -0.5 * std::arg(q[j])));

  const double had[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  SnDecomposition dec;
  CMatrix rec = CMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    CVector z = CVector::Zero(4);
    for (int j = 0; j < 4; ++j) z += 0.5 * had[i][j] * phase[j] * x[j];
    const double w = z.squaredNorm();
    if (w < 1e-14) continue;
    CVector unit = z / z.norm();
    // The construction makes <z|flip zbar> = 0, so the second Schmidt
    // coefficient is at rounding level; project to an exact product.
    CVector prod = schmidt_truncate(unit, 2, 2, 1);
    dec.weights.push_back(w);
    dec.vectors.push_back(prod);
    rec += w * prod * prod.adjoint();
  }
  dec.residual = trace_norm_hermitian(rho.mat - rec);
  return dec;
}

RVector nnls(const Eigen::MatrixXd& gram, const RVector& b, double tol, int max_iter) {
  const Index m = b.size();
  if (gram.rows() != m || gram.cols() != m) throw std::invalid_argument("nnls: shape mismatch");
  if (max_iter == 0) max_iter = static_cast<int>(3 * m + 30);

  RVector x = RVector::Zero(m);
  std::vector<bool> passive(m, false);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());

  for (int iter = 0; iter < max_iter; ++iter) {
    const RVector w = b - gram * x;
    Index best = -1;
    double bestw = tol * scale;
    for (Index j = 0; j < m; ++j)
      if (!passive[j] && w(j) > bestw) {
        bestw = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < max_iter; ++inner) {
      std::vector<Index> idx;
      for (Index j = 0; j < m; ++j)
        if (passive[j]) idx.push_back(j);
      const Index p = static_cast<Index>(idx.size());
      Eigen::MatrixXd gp(p, p);
      RVector bp(p);
      for (Index r = 0; r < p; ++r) {
        bp(r) = b(idx[r]);
        for (Index cidx = 0; cidx < p; ++cidx) gp(r, cidx) = gram(idx[r], idx[cidx]);
      }
      gp.diagonal().array() += 1e-13 * scale;
      const RVector z = gp.ldlt().solve(bp);

      double alpha = 1.0;
      bool feasible = true;
      for (Index r = 0; r < p; ++r)
        if (z(r) <= 0) {
          feasible = false;
          const double xi = x(idx[r]);
          if (xi - z(r) > 0) alpha = std::min(alpha, xi / (xi - z(r)));
        }
      if (feasible) {
        x.setZero();
        for (Index r = 0; r < p; ++r) x(idx[r]) = z(r);
        break;
      }
      for (Index r = 0; r < p; ++r) {
        const double nx = x(idx[r]) + alpha * (z(r) - x(idx[r]));
        x(idx[r]) = nx;
        if (nx <= tol * scale) {
          passive[idx[r]] = false;
          x(idx[r]) = 0.0;
        }
      }
    }
  }
  return x;
}

}  // namespace detail

namespace {

// Bottom eigenpair of the Hermitian part.
std::pair<double, CVector> bottom_pair(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + CMatrix(m.adjoint())));
  CVector v = es.eigenvectors().col(0);
  phase_fix(v);
  return {es.eigenvalues()(0), v};
}

// Cor-5.4-style optimized witness: from the bottom eigenvector w of the
// amplified predual of `base` at rho, the composed map base . ad_V with
// V^dag x0 = unvec(w) pairs with rho exactly at that eigenvalue.
std::optional<SnWitness> optimized_witness(const QuantumMap& base, Index k,
                                           const BipartiteOperator& rho,
                                           const SeeSawConfig& cfg) {
  const Index n = base.dim();
  const BipartiteOperator amp = tilde_predual(base, rho);
  auto [lam, w] = bottom_pair(amp.mat);
  if (lam >= -cfg.tol) return std::nullopt;

  const CyclicVector mes = CyclicVector::maximally_entangled(n);
  const CMatrix vdag = unvec_J(w, n) * mes.inverse();
  QuantumMap witness = compose(base, ad(vdag.adjoint()));

  const BipartiteOperator wc = choi_C(witness, mes);
  const double pairing = std::real(pair_trace(wc, rho));
  if (pairing >= -cfg.tol) return std::nullopt;

  // Re-validate k-positivity of the witness with a reduced budget; the
  // composition is k-positive by construction, this guards the numerics.
  SeeSawConfig check = cfg;
  check.restarts = std::max(4, cfg.restarts / 4);
  if (is_k_positive(witness, k, mes, check).violated()) return std::nullopt;

  SnWitness out;
  out.k = k;
  out.pairing = pairing;
  out.witness_op = wc;
  out.map = std::move(witness);
  return out;
}

}  // namespace

SnLowerResult sn_lower(const BipartiteOperator& rho, const SeeSawConfig& cfg) {
  validate_state(rho);
  const Index d1 = rho.dim_first, d2 = rho.dim_second;
  SnLowerResult result;

  if (d1 == d2) {
    const Index n = d1;
    for (Index k = n - 1; k >= 1; --k) {
      std::vector<QuantumMap> bases;
      bases.push_back(witness_map(static_cast<double>(k), n));
      if (k == 1) {
        bases.push_back(transpose_map(n));
        bases.push_back(compose(witness_map(1.0, n), transpose_map(n)));
      }
      for (const auto& base : bases) {
        auto w = optimized_witness(base, k, rho, cfg);
        if (w) {
          result.lower = k + 1;
          result.witness = std::move(w);
          return result;
        }
      }
    }
    return result;
  }

  // Rectangular local dimensions: the partial-transpose eigenvector witness
  // certifies SN >= 2.
  const BipartiteOperator pt = partial_transpose(rho, Side::First);
  auto [lam, w] = bottom_pair(pt.mat);
  if (lam < -cfg.tol) {
    SnWitness wit;
    wit.k = 1;
    wit.pairing = lam;
    wit.witness_op = partial_transpose(BipartiteOperator(d1, d2, w * w.adjoint()), Side::First);
    result.lower = 2;
    result.witness = std::move(wit);
  }
  return result;
}

namespace {

struct AtomSet {
  std::vector<CVector> vectors;
  RVector weights;

  CMatrix reconstruct(Index t) const {
    CMatrix rec = CMatrix::Zero(t, t);
    for (size_t i = 0; i < vectors.size(); ++i)
      if (weights(static_cast<Index>(i)) > 0)
        rec += weights(static_cast<Index>(i)) * vectors[i] * vectors[i].adjoint();
    return rec;
  }
};

void reweight(AtomSet& atoms, const CMatrix& rho) {
  const Index m = static_cast<Index>(atoms.vectors.size());
  Eigen::MatrixXd gram(m, m);
  RVector b(m);
  for (Index i = 0; i < m; ++i) {
    b(i) = std::real(Complex(atoms.vectors[i].adjoint() * rho * atoms.vectors[i]));
    for (Index j = 0; j <= i; ++j) {
      const double g = std::norm(Complex(atoms.vectors[i].adjoint() * atoms.vectors[j]));
      gram(i, j) = g;
      gram(j, i) = g;
    }
  }
  atoms.weights = detail::nnls(gram, b);
}

void prune(AtomSet& atoms) {
  std::vector<CVector> kept;
  std::vector<double> w;
  for (size_t i = 0; i < atoms.vectors.size(); ++i)
    if (atoms.weights(static_cast<Index>(i)) > 1e-14) {
      kept.push_back(atoms.vectors[i]);
      w.push_back(atoms.weights(static_cast<Index>(i)));
    }
  atoms.vectors = std::move(kept);
  atoms.weights = RVector::Zero(static_cast<Index>(w.size()));
  for (size_t i = 0; i < w.size(); ++i) atoms.weights(static_cast<Index>(i)) = w[i];
}

// Best Schmidt-rank-k unit vector for maximizing <v|R|v>.
CVector best_atom(const CMatrix& r, Index d1, Index d2, Index k, const SeeSawConfig& cfg,
                  double* gain) {
  SeeSawConfig local = cfg;
  local.restarts = std::max(4, cfg.restarts / 8);
  local.max_iters = std::min(cfg.max_iters, 60);
  SeeSawResult res = seesaw_min_quadratic(-r, d1, d2, k, local);
  *gain = -res.value;
  CVector v = vec_J(res.minimizer);
  const double norm = v.norm();
  if (norm > 0) v /= norm;
  return v;
}

}  // namespace

std::optional<SnDecomposition> sn_upper(const BipartiteOperator& rho, Index k,
                                        const SeeSawConfig& cfg) {
  validate_state(rho);
  const Index d1 = rho.dim_first, d2 = rho.dim_second;
  const Index t = d1 * d2;
  if (k < 1) throw std::invalid_argument("sn_upper: k must be >= 1");
  const Index kk = std::min(k, std::min(d1, d2));
  constexpr double kFoundGate = 1e-6;
  constexpr double kAttachGate = 1e-8;

  // Eigendecomposition fast path: exact when every retained eigenvector
  // already has Schmidt rank <= k.
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.mat);
    const double lmax = es.eigenvalues().maxCoeff();
    SnDecomposition dec;
    bool all_low_rank = true;
    double dropped = 0.0;
    for (Index i = 0; i < t; ++i) {
      const double lam = es.eigenvalues()(i);
      if (lam <= 1e-12 * std::max(lmax, 1.0)) {
        dropped += std::abs(lam);
        continue;
      }
      CVector v = es.eigenvectors().col(i);
      phase_fix(v);
      if (schmidt_rank(v, d1, d2) > kk) {
        all_low_rank = false;
        break;
      }
      dec.weights.push_back(lam);
      dec.vectors.push_back(std::move(v));
    }
    if (all_low_rank) {
      dec.residual = dropped;
      if (dec.residual < kFoundGate) return dec;
    }
  }

  if (kk == 1 && !ppt_check(rho, 1e-9)) return std::nullopt;  // provably impossible

  if (kk == 1 && d1 == 2 && d2 == 2) {
    auto dec = detail::wootters_product_decomposition(rho);
    if (dec && dec->residual < kFoundGate) return dec;
    return std::nullopt;
  }

  // Greedy atom construction with nonnegative reweighting.
  AtomSet atoms;
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.mat);
    const double lmax = es.eigenvalues().maxCoeff();
    for (Index i = 0; i < t; ++i) {
      if (es.eigenvalues()(i) <= 1e-10 * std::max(lmax, 1.0)) continue;
      CVector v = es.eigenvectors().col(i);
      phase_fix(v);
      atoms.vectors.push_back(schmidt_truncate(v, d1, d2, kk));
    }
    reweight(atoms, rho.mat);
    prune(atoms);
  }

  const int max_atoms = static_cast<int>(16 * t);
  const int max_iters = 240;
  double residual = trace_norm_hermitian(rho.mat - atoms.reconstruct(t));
  for (int it = 0; it < max_iters && residual >= kAttachGate; ++it) {
    const CMatrix r = rho.mat - atoms.reconstruct(t);
    SeeSawConfig atom_cfg = cfg;
    atom_cfg.seed = cfg.seed + 0x51ed2701ULL * static_cast<std::uint64_t>(it + 1);
    double gain = 0.0;
    CVector v = best_atom(r, d1, d2, kk, atom_cfg, &gain);
    if (gain > 1e-13 && static_cast<int>(atoms.vectors.size()) < max_atoms) {
      atoms.vectors.push_back(std::move(v));
    } else if (gain <= 1e-13) {
      // No improving direction; polish below may still help once.
    }
    // Periodic polish: re-optimize each atom against the residual plus its
    // own contribution.
    if (it % 4 == 3) {
      for (size_t i = 0; i < atoms.vectors.size(); ++i) {
        const Index ii = static_cast<Index>(i);
        const double wi = (atoms.weights.size() > ii) ? atoms.weights(ii) : 0.0;
        if (wi <= 0) continue;
        const CMatrix ri =
            rho.mat - atoms.reconstruct(t) + wi * atoms.vectors[i] * atoms.vectors[i].adjoint();
        SeeSawConfig pol = cfg;
        pol.restarts = 2;
        pol.max_iters = 40;
        pol.seed = cfg.seed + 0x9d2c5681ULL * (i + 1) + static_cast<std::uint64_t>(it);
        SeeSawResult res =
            seesaw_min_quadratic(-ri, d1, d2, kk, pol, {unvec_bipartite(atoms.vectors[i], d1, d2)});
        CVector cand = vec_J(res.minimizer);
        if (cand.norm() > 0) cand /= cand.norm();
        const double before = std::real(Complex(atoms.vectors[i].adjoint() * ri * atoms.vectors[i]));
        if (-res.value > before + 1e-14) atoms.vectors[i] = std::move(cand);
      }
    }
    reweight(atoms, rho.mat);
    prune(atoms);
    const double next = trace_norm_hermitian(rho.mat - atoms.reconstruct(t));
    if (next > residual - 1e-14 && gain <= 1e-13) {
      residual = std::min(residual, next);
      break;  // stalled
    }
    residual = next;
  }

  if (residual < kFoundGate) {
    SnDecomposition dec;
    dec.vectors = atoms.vectors;
    dec.weights.assign(atoms.weights.data(), atoms.weights.data() + atoms.weights.size());
    dec.residual = residual;
    return dec;
  }
  return std::nullopt;
}

SNBounds sn_bounds(const BipartiteOperator& rho, const SeeSawConfig& cfg) {
  SNBounds out;
  SnLowerResult lower = sn_lower(rho, cfg);
  out.lower = lower.lower;
  out.lower_witness = std::move(lower.witness);

  const Index cap = std::min(rho.dim_first, rho.dim_second);
  for (Index k = out.lower; k <= cap; ++k) {
    auto dec = sn_upper(rho, k, cfg);
    if (dec) {
      out.upper = k;
      if (dec->residual <= 1e-8) out.upper_decomposition = std::move(dec);
      break;
    }
  }
  if (!out.upper && out.lower == 1 && std::min(rho.dim_first, rho.dim_second) == 2 &&
      std::max(rho.dim_first, rho.dim_second) <= 3 && ppt_check(rho)) {
    // PPT is exact at 2x2 and 2x3 even when no decomposition was found.
    out.upper = 1;
    out.upper_via_ppt_regime = true;
  }
  return out;
}

}  // namespace qchoi
