#pragma once

#include "qchoi/types.hpp"

#include <cmath>
#include <cstdint>

namespace qchoi {

// Deterministic RNG used everywhere randomness is needed.  splitmix64 plus a
// hand-rolled Box-Muller keeps runs byte-identical across standard libraries,
// which std::normal_distribution does not guarantee.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  // Independent stream for (seed, index), e.g. one per see-saw restart.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
    r.next();
    r.next();
    return r;
  }

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1].
  double uniform() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gauss() {
    const double u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

  // Standard complex Gaussian, E|z|^2 = 1.
  Complex cgauss() {
    const double s = M_SQRT1_2;
    return {s * gauss(), s * gauss()};
  }

  CMatrix cmatrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = cgauss();
    return m;
  }

  CVector cvector(Index n) {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cgauss();
    return v;
  }

  // Random unitary via Householder QR with a phase-fixed R diagonal.
  CMatrix unitary(Index n) {
    CMatrix g = cmatrix(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
      const Complex d = r(i, i);
      q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
  }
};

}  // namespace qchoi
