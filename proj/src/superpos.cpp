#include "qchoi/superpos.hpp"

#include "qchoi/generators.hpp"
#include "qchoi/kernels.hpp"
#include "qchoi/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace qchoi {

DNormValue d_norm(const QuantumMap& phi, const CyclicVector& x0) {
  DNormValue out;
  out.x0 = x0.matrix();
  out.x0_normalized = x0.normalized();

  const ChoiFactors f = choi_D_factors(phi, x0);
  const Index r = f.u.cols();
  if (r == 0) return out;

  // choi_D = U V^dag has the singular values of R_u R_v^dag, so the trace
  // norm comes from an r x r problem instead of an n^2 x n^2 one.
  const Index rm = std::min(f.u.rows(), r);
  Eigen::HouseholderQR<CMatrix> qu(f.u), qv(f.v);
  const CMatrix ru = CMatrix(qu.matrixQR().topRows(rm).triangularView<Eigen::Upper>());
  const CMatrix rv = CMatrix(qv.matrixQR().topRows(rm).triangularView<Eigen::Upper>());
  const CMatrix core = ru * rv.adjoint();
  Eigen::JacobiSVD<CMatrix> svd(core);
  out.value = svd.singularValues().sum();
  return out;
}

namespace {

double reconstruction_gap(const QuantumMap& a, const QuantumMap& b) {
  return max_abs(std_choi(map_sub(a, b)).mat);
}

// Move an sn_lower witness from the canonical frame into the x0 frame:
// psi' = psi . ad((x0^dag)^{-1}) pairs with choi_D(phi, x0) the way psi
// paired with the normalized state.
std::optional<SnWitness> rebase_witness(const std::optional<SnWitness>& w,
                                        const CyclicVector& x0,
                                        const BipartiteOperator& d) {
  if (!w || !w->map) return w;
  SnWitness out = *w;
  out.map = compose(*w->map, ad(x0.inverse().adjoint()));
  out.witness_op = choi_C(*out.map, x0);
  out.pairing = std::real(pair_trace(out.witness_op, d));
  return out;
}

}  // namespace

SuperposVerdict is_k_superpositive(const QuantumMap& phi, Index k, const CyclicVector& x0,
                                   const SeeSawConfig& cfg) {
  if (k < 1 || k > phi.dim()) throw std::invalid_argument("is_k_superpositive: invalid k");
  const CpResult cp = is_cp(phi, x0);
  if (!cp.cp) throw NotCompletelyPositive("is_k_superpositive: map is not completely positive");

  SuperposVerdict v;
  v.k = k;

  const Index n = phi.dim();
  BipartiteOperator d = choi_D(phi, x0);
  d.mat = 0.5 * (d.mat + CMatrix(d.mat.adjoint()));
  const double t = d.mat.trace().real();
  if (t < 1e-14) {
    v.status = SuperposStatus::Yes;  // zero map, empty decomposition
    return v;
  }
  const BipartiteOperator rho(n, n, d.mat / t);

  const SnLowerResult low = sn_lower(rho, cfg);
  v.sn_lower_bound = low.lower;
  if (low.lower >= k + 1) {
    v.status = SuperposStatus::No;
    v.witness = rebase_witness(low.witness, x0, d);
    if (v.witness) v.witness_pairing = v.witness->pairing;
    return v;
  }

  const auto dec = sn_upper(rho, k, cfg);
  if (dec) {
    std::vector<CMatrix> ops;
    QuantumMap rec = zero_map(n);
    for (size_t i = 0; i < dec->vectors.size(); ++i) {
      const double w = dec->weights[i];
      if (w <= 0) continue;
      const CMatrix vx0 = unvec_J(CVector(std::sqrt(t * w) * dec->vectors[i]), n);
      CMatrix vi = vx0 * x0.inverse();
      rec = map_add(rec, ad(vi));
      ops.push_back(std::move(vi));
    }
    const double err = reconstruction_gap(rec, phi);
    const double scale = 1.0 + max_abs(std_choi(phi).mat);
    if (err <= 1e-7 * scale) {
      v.status = SuperposStatus::Yes;
      v.kraus_rank_k = std::move(ops);
      v.reconstruction_error = err;
      return v;
    }
  }

  v.status = SuperposStatus::Unknown;
  return v;
}

SuperposVerdict is_entanglement_breaking(const QuantumMap& phi, const CyclicVector& x0,
                                         const SeeSawConfig& cfg) {
  SuperposVerdict v = is_k_superpositive(phi, 1, x0, cfg);

  // Sampled check: the amplified predual must send pure states to states
  // that pass the separability screen.  A certified entangled output is a
  // counterexample.
  const Index n = phi.dim();
  Rng rng(cfg.seed ^ 0xeb5eedULL);
  SeeSawConfig screen_cfg = cfg;
  screen_cfg.restarts = std::max(4, cfg.restarts / 4);
  int violations = 0;
  for (int s = 0; s < 50; ++s) {
    CMatrix x = rng.cmatrix(n, n);
    x /= x.norm();
    const CVector j = vec_J(x);
    BipartiteOperator pure(n, n, j * j.adjoint());
    BipartiteOperator tau = tilde_predual(phi, pure);
    tau.mat = 0.5 * (tau.mat + CMatrix(tau.mat.adjoint()));
    const double tr = tau.mat.trace().real();
    if (tr < 1e-12) continue;
    tau.mat /= tr;
    bool entangled = false;
    if (n == 2) {
      entangled = !ppt_check(tau, 1e-9);
    } else {
      entangled = sn_lower(tau, screen_cfg).lower >= 2;
    }
    if (entangled) ++violations;
  }
  v.sampled_violations = violations;
  if (violations > 0 && v.status != SuperposStatus::Yes) v.status = SuperposStatus::No;
  return v;
}

std::optional<std::vector<CMatrix>> eb_kraus_rank_one(const QuantumMap& phi,
                                                      const CyclicVector& x0,
                                                      const SeeSawConfig& cfg) {
  const SuperposVerdict v = is_k_superpositive(phi, 1, x0, cfg);
  if (v.status != SuperposStatus::Yes) return std::nullopt;
  return v.kraus_rank_k;
}

}  // namespace qchoi
