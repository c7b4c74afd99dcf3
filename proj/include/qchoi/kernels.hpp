#pragma once

#include "qchoi/types.hpp"

#include <functional>

namespace qchoi {

// Tensor bookkeeping kernels.  Each has an OpenMP-parallel implementation
// here and a serial reference twin in qchoi::ref; tests check they agree and
// tools/qchoi_bench compares their throughput.  All kernels are parallel over
// output elements only, so results are bitwise independent of the schedule.

// Kronecker product, row index (i1, i2) -> i1*rows(b) + i2.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Trace out one factor: partial_trace(X, First) returns the dim_second
// operator, partial_trace(X, Second) the dim_first one.
CMatrix partial_trace(const BipartiteOperator& x, Side side);

// Transpose one factor in place of the full transpose.
BipartiteOperator partial_transpose(const BipartiteOperator& x, Side side);

// Apply an n x n matrix function to every (i, j) block of a bipartite
// operator (the second factor carries the blocks): tilde-amplification.
BipartiteOperator apply_blockwise(const BipartiteOperator& x,
                                  const std::function<CMatrix(const CMatrix&)>& f);

// Accumulate sum_t u_t v_t^dag from factor matrices U (cols u_t) and
// V (cols v_t).  The assembly path for generalized Choi matrices.
CMatrix outer_accumulate(const CMatrix& u, const CMatrix& v);

namespace ref {

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix partial_trace(const BipartiteOperator& x, Side side);
BipartiteOperator partial_transpose(const BipartiteOperator& x, Side side);
BipartiteOperator apply_blockwise(const BipartiteOperator& x,
                                  const std::function<CMatrix(const CMatrix&)>& f);
CMatrix outer_accumulate(const CMatrix& u, const CMatrix& v);

}  // namespace ref

}  // namespace qchoi
