#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qchoi/generators.hpp"
#include "qchoi/kernels.hpp"
#include "qchoi/rng.hpp"

using namespace qchoi;

namespace {
const double kEps = 1e-12;
}

TEST_CASE("parallel kernels agree with the serial reference") {
  Rng rng(11);
  for (const Index d1 : {2, 3, 5}) {
    for (const Index d2 : {2, 4}) {
      const CMatrix a = rng.cmatrix(d1, d1);
      const CMatrix b = rng.cmatrix(d2, d2);
      CHECK(max_abs(kron(a, b) - ref::kron(a, b)) < kEps);

      const BipartiteOperator x(d1, d2, rng.cmatrix(d1 * d2, d1 * d2));
      CHECK(max_abs(partial_trace(x, Side::First) - ref::partial_trace(x, Side::First)) < kEps);
      CHECK(max_abs(partial_trace(x, Side::Second) - ref::partial_trace(x, Side::Second)) < kEps);
      CHECK(max_abs(partial_transpose(x, Side::First).mat -
                    ref::partial_transpose(x, Side::First).mat) < kEps);
      CHECK(max_abs(partial_transpose(x, Side::Second).mat -
                    ref::partial_transpose(x, Side::Second).mat) < kEps);

      const auto f = [&](const CMatrix& blk) { return CMatrix(b * blk); };
      CHECK(max_abs(apply_blockwise(x, f).mat - ref::apply_blockwise(x, f).mat) < kEps);

      const CMatrix u = rng.cmatrix(d1 * d2, 3);
      const CMatrix v = rng.cmatrix(d1 * d2, 3);
      CHECK(max_abs(outer_accumulate(u, v) - ref::outer_accumulate(u, v)) < kEps);
    }
  }
}

TEST_CASE("kron against hand-computed entries") {
  CMatrix a(2, 2), b(2, 2);
  a << Complex(1, 0), Complex(2, 0), Complex(0, 1), Complex(0, 0);
  b << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(3, 0);
  const CMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(std::abs(k(0, 0) - Complex(1, 0)) < kEps);
  CHECK(std::abs(k(1, 1) - Complex(3, 0)) < kEps);
  CHECK(std::abs(k(0, 2) - Complex(2, 0)) < kEps);
  CHECK(std::abs(k(1, 3) - Complex(6, 0)) < kEps);
  CHECK(std::abs(k(2, 0) - Complex(0, 1)) < kEps);
  CHECK(std::abs(k(3, 1) - Complex(0, 3)) < kEps);
}

TEST_CASE("kron(I2, e00) has trace 2") {
  CMatrix e00 = CMatrix::Zero(2, 2);
  e00(0, 0) = 1;
  const CMatrix k = kron(CMatrix::Identity(2, 2), e00);
  CHECK(std::abs(k.trace() - Complex(2, 0)) < kEps);
}

TEST_CASE("partial_trace of the maximally entangled projector") {
  const Index n = 2;
  const CVector w = omega_vec(n);
  const BipartiteOperator omega = BipartiteOperator::symmetric(w * w.adjoint());
  // Tracing out either factor of Omega leaves the identity.
  CHECK(max_abs(partial_trace(omega, Side::First) - CMatrix::Identity(n, n)) < kEps);
  CHECK(max_abs(partial_trace(omega, Side::Second) - CMatrix::Identity(n, n)) < kEps);
}

TEST_CASE("partial_transpose of Omega is the swap") {
  const Index n = 2;
  const CVector w = omega_vec(n);
  const BipartiteOperator omega = BipartiteOperator::symmetric(w * w.adjoint());
  const BipartiteOperator pt = partial_transpose(omega, Side::First);
  // Entrywise oracle: SWAP[(i,k),(j,l)] = delta_{il} delta_{kj}.
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < n; ++j)
        for (Index l = 0; l < n; ++l) {
          const Complex expected = (i == l && k == j) ? 1.0 : 0.0;
          CHECK(std::abs(pt.mat(i * n + k, j * n + l) - expected) < kEps);
        }
}

TEST_CASE("partial_transpose is an involution and partial_trace splits kron") {
  Rng rng(5);
  for (const Index d1 : {2, 3}) {
    for (const Index d2 : {2, 3}) {
      const BipartiteOperator x(d1, d2, rng.cmatrix(d1 * d2, d1 * d2));
      for (const Side s : {Side::First, Side::Second}) {
        const BipartiteOperator twice = partial_transpose(partial_transpose(x, s), s);
        CHECK(max_abs(twice.mat - x.mat) < kEps);
      }
      const CMatrix a = rng.cmatrix(d1, d1);
      const CMatrix b = rng.cmatrix(d2, d2);
      const BipartiteOperator prod(d1, d2, kron(a, b));
      CHECK(max_abs(partial_trace(prod, Side::First) - CMatrix(a.trace() * b)) < kEps);
      CHECK(max_abs(partial_trace(prod, Side::Second) - CMatrix(b.trace() * a)) < kEps);
    }
  }
}
