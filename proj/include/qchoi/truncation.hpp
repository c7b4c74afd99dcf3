#pragma once

#include "qchoi/superpos.hpp"

#include <string>
#include <vector>

namespace qchoi {

// An orthonormal family in the ambient space K = C^N; the domain side of the
// finite compression.
class Subspace {
 public:
  // Columns must be orthonormal to 1e-12.
  static Subspace from_basis(CMatrix basis);
  static Subspace standard(Index ambient, Index d);
  static Subspace random(Index ambient, Index d, Rng& rng);

  Index ambient() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const CMatrix& basis() const { return basis_; }

 private:
  explicit Subspace(CMatrix b) : basis_(std::move(b)) {}
  CMatrix basis_;
};

// The compression data for a pair (F, x0): the orthonormalized image basis
// of {x0 f_i} (in the given order) and the induced isometry
// Lambda = conj(Q_F) (x) G between the flattened spaces.
struct Compression {
  CMatrix domain_basis;  // N x d, the subspace basis
  CMatrix range_basis;   // N x d, orthonormalized x0 * domain
  CMatrix lambda;        // N^2 x d^2 isometry

  Compression(const Subspace& f, const CyclicVector& x0);
};

// iota: H_F -> H embeds a d x d operator (bases: F on the domain, x0 F on
// the range) as an N x N one; an HS isometry.  pi is its adjoint;
// pi . iota = id.
CMatrix iota(const CMatrix& y, const Compression& c);
CMatrix pi(const CMatrix& x, const Compression& c);

// X_F = pi . X . iota as a d^2 x d^2 matrix; positivity is inherited.
BipartiteOperator compress(const BipartiteOperator& x, const Compression& c);

// x0 = sum_m m^{-(1+p)/2} e_m (x) e_m, m = 1..N.
CyclicVector diag_cyclic(Index ambient, double p, bool normalized);

// One row of a convergence experiment: the map sequence member against the
// target, measured in several topologies at once.
struct ConvergenceRow {
  int m = 0;
  double cb_proxy = 0.0;       // |phi_m(I)| operator norm
  double dnorm = 0.0;          // |phi_m|_D
  double dnorm_gap = 0.0;      // |phi_m - phi|_D (the choi_D trace-norm gap)
  double max_unit_gap = 0.0;   // max entrywise gap on matrix units
  double weakstar_gap = 0.0;   // max pairing gap against the sampled trace-class set
  bool uniformly_bounded = false;  // running sup of cb_proxy below the bound
};

struct ConvergenceFamily {
  enum class Kind { AdSeq, Constant, Interpolation, List };
  Kind kind = Kind::AdSeq;
  double p = 1.0;      // AdSeq: x0 exponent (unnormalized diagonal vector)
  double eps = 0.1;    // AdSeq: V_m scale exponent
  int steps = 16;      // Constant / Interpolation length
  std::vector<QuantumMap> maps;  // Constant/Interpolation target; List members
};

// Runs the family against its limit and tabulates the gaps.  The weak*
// columns are a desk-scale proxy: entrywise gaps on matrix units plus
// pairings against `test_set` seeded random trace-class operators.  AdSeq
// reads its dimension from the supplied x0 (the unnormalized diagonal
// vector built from p) and runs m = 1..N.
std::vector<ConvergenceRow> convergence_run(const ConvergenceFamily& family,
                                            const CyclicVector& x0, Index test_set,
                                            std::uint64_t seed);

std::string convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace qchoi
