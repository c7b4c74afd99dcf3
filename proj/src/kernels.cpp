#include "qchoi/kernels.hpp"

#include <omp.h>

namespace qchoi {

namespace {
// Below this many output entries the fork/join overhead dominates.
constexpr Index kParallelCutoff = 4096;
}  // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  CMatrix out(ar * br, ac * bc);
  const bool par = out.size() >= kParallelCutoff;
#pragma omp parallel for collapse(2) if (par)
  for (Index i1 = 0; i1 < ar; ++i1)
    for (Index j1 = 0; j1 < ac; ++j1)
      out.block(i1 * br, j1 * bc, br, bc) = a(i1, j1) * b;
  return out;
}

CMatrix partial_trace(const BipartiteOperator& x, Side side) {
  const Index d1 = x.dim_first, d2 = x.dim_second;
  if (side == Side::First) {
    CMatrix out = CMatrix::Zero(d2, d2);
#pragma omp parallel for collapse(2) if (d2 * d2 >= 64)
    for (Index k = 0; k < d2; ++k)
      for (Index l = 0; l < d2; ++l) {
        Complex s = 0;
        for (Index i = 0; i < d1; ++i) s += x.mat(i * d2 + k, i * d2 + l);
        out(k, l) = s;
      }
    return out;
  }
  CMatrix out = CMatrix::Zero(d1, d1);
#pragma omp parallel for collapse(2) if (d1 * d1 >= 64)
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j) {
      Complex s = 0;
      for (Index k = 0; k < d2; ++k) s += x.mat(i * d2 + k, j * d2 + k);
      out(i, j) = s;
    }
  return out;
}

BipartiteOperator partial_transpose(const BipartiteOperator& x, Side side) {
  const Index d1 = x.dim_first, d2 = x.dim_second;
  CMatrix out(d1 * d2, d1 * d2);
  const bool par = out.size() >= kParallelCutoff;
  if (side == Side::First) {
#pragma omp parallel for collapse(2) if (par)
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        out.block(i * d2, j * d2, d2, d2) = x.mat.block(j * d2, i * d2, d2, d2);
  } else {
#pragma omp parallel for collapse(2) if (par)
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        out.block(i * d2, j * d2, d2, d2) = x.mat.block(i * d2, j * d2, d2, d2).transpose();
  }
  return {d1, d2, std::move(out)};
}

BipartiteOperator apply_blockwise(const BipartiteOperator& x,
                                  const std::function<CMatrix(const CMatrix&)>& f) {
  const Index d1 = x.dim_first, d2 = x.dim_second;
  CMatrix out(d1 * d2, d1 * d2);
#pragma omp parallel for collapse(2) if (d1 * d1 >= 4)
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j)
      out.block(i * d2, j * d2, d2, d2) = f(x.mat.block(i * d2, j * d2, d2, d2));
  return {d1, d2, std::move(out)};
}

CMatrix outer_accumulate(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("outer_accumulate: factor shapes differ");
  const Index n = u.rows();
  CMatrix out(n, n);
  const CMatrix vh = v.adjoint();
#pragma omp parallel for if (n >= 128)
  for (Index i = 0; i < n; ++i) out.row(i) = u.row(i) * vh;
  return out;
}

namespace ref {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  CMatrix out(ar * br, ac * bc);
  for (Index i1 = 0; i1 < ar; ++i1)
    for (Index j1 = 0; j1 < ac; ++j1)
      out.block(i1 * br, j1 * bc, br, bc) = a(i1, j1) * b;
  return out;
}

CMatrix partial_trace(const BipartiteOperator& x, Side side) {
  const Index d1 = x.dim_first, d2 = x.dim_second;
  if (side == Side::First) {
    CMatrix out = CMatrix::Zero(d2, d2);
    for (Index i = 0; i < d1; ++i) out += x.mat.block(i * d2, i * d2, d2, d2);
    return out;
  }
  CMatrix out = CMatrix::Zero(d1, d1);
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j) out(i, j) = x.mat.block(i * d2, j * d2, d2, d2).trace();
  return out;
}

BipartiteOperator partial_transpose(const BipartiteOperator& x, Side side) {
  const Index d1 = x.dim_first, d2 = x.dim_second;
  CMatrix out(d1 * d2, d1 * d2);
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j) {
      if (side == Side::First)
        out.block(i * d2, j * d2, d2, d2) = x.mat.block(j * d2, i * d2, d2, d2);
      else
        out.block(i * d2, j * d2, d2, d2) = x.mat.block(i * d2, j * d2, d2, d2).transpose();
    }
  return {d1, d2, std::move(out)};
}

BipartiteOperator apply_blockwise(const BipartiteOperator& x,
                                  const std::function<CMatrix(const CMatrix&)>& f) {
  const Index d1 = x.dim_first, d2 = x.dim_second;
  CMatrix out(d1 * d2, d1 * d2);
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j)
      out.block(i * d2, j * d2, d2, d2) = f(x.mat.block(i * d2, j * d2, d2, d2));
  return {d1, d2, std::move(out)};
}

CMatrix outer_accumulate(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("outer_accumulate: factor shapes differ");
  return u * v.adjoint();
}

}  // namespace ref

}  // namespace qchoi
