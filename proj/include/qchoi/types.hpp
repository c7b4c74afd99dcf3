#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qchoi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Shared tolerance policy.
inline constexpr double kHermTol = 1e-10;  // relative, max|X - X^dag| <= tol*(1+max|X|)
inline constexpr double kRankTol = 1e-9;   // relative to the largest singular value
inline constexpr double kCacheTol = 1e-12; // cached derived objects vs recomputation

struct NotCompletelyPositive : std::runtime_error {
  explicit NotCompletelyPositive(const std::string& what) : std::runtime_error(what) {}
};

struct NotAState : std::runtime_error {
  explicit NotAState(const std::string& what) : std::runtime_error(what) {}
};

enum class Side { First, Second };

inline double max_abs(const CMatrix& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMatrix& x, double rtol = kHermTol) {
  if (x.rows() != x.cols()) return false;
  return max_abs(x - x.adjoint()) <= rtol * (1.0 + max_abs(x));
}

// Operator on a tensor product of two factors.  The first factor is the
// commutant side, the second the algebra side; the flattened index of
// (i, k) is i*dim_second + k.
struct BipartiteOperator {
  Index dim_first = 0;
  Index dim_second = 0;
  CMatrix mat;

  BipartiteOperator() = default;
  BipartiteOperator(Index d1, Index d2, CMatrix m) : dim_first(d1), dim_second(d2), mat(std::move(m)) {
    if (d1 <= 0 || d2 <= 0) throw std::invalid_argument("BipartiteOperator: nonpositive local dimension");
    if (mat.rows() != d1 * d2 || mat.cols() != d1 * d2)
      throw std::invalid_argument("BipartiteOperator: matrix size does not match d1*d2");
  }

  // Square bipartite operator with equal local dimensions d x d.
  static BipartiteOperator symmetric(CMatrix m) {
    const Index t = m.rows();
    if (t != m.cols()) throw std::invalid_argument("BipartiteOperator: matrix not square");
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(t))));
    if (d * d != t) throw std::invalid_argument("BipartiteOperator: size is not a perfect square");
    return {d, d, std::move(m)};
  }

  Index total() const { return dim_first * dim_second; }
  bool hermitian(double rtol = kHermTol) const { return is_hermitian(mat, rtol); }
};

// The Hilbert space HS(K) is identified with K (x) K through
// J(x) = (I (x) x) omega, omega = sum_l e_l (x) e_l, so that
// J(x)[l*n + k] = x(k, l): a column-major flatten of x.
inline CVector vec_J(const CMatrix& x) {
  return CVector(Eigen::Map<const CVector>(x.data(), x.size()));
}

inline CMatrix unvec_J(const CVector& v, Index n) {
  if (v.size() != n * n) throw std::invalid_argument("unvec_J: length is not n^2");
  return CMatrix(Eigen::Map<const CMatrix>(v.data(), n, n));
}

// Rectangular variant: a vector on d1 (x) d2 (first factor major) is the
// column-major flatten of a d2 x d1 matrix whose rank is the Schmidt rank.
inline CMatrix unvec_bipartite(const CVector& v, Index d1, Index d2) {
  if (v.size() != d1 * d2) throw std::invalid_argument("unvec_bipartite: length is not d1*d2");
  return CMatrix(Eigen::Map<const CMatrix>(v.data(), d2, d1));
}

// omega = sum_l e_l (x) e_l = J(I_n).
inline CVector omega_vec(Index n) {
  CVector w = CVector::Zero(n * n);
  for (Index l = 0; l < n; ++l) w(l * n + l) = 1.0;
  return w;
}

}  // namespace qchoi
