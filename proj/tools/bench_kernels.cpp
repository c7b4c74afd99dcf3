// Timing comparison between the OpenMP kernels and their serial reference
// twins on the sizes the truncation experiments actually hit.

#include "qchoi/kernels.hpp"
#include "qchoi/rng.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace qchoi;

namespace {

double time_ms(const std::function<void()>& f, int reps) {
  f();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const Index n = (argc > 1) ? std::atoll(argv[1]) : 64;
  const int reps = (argc > 2) ? std::atoi(argv[2]) : 5;
  std::printf("kernel benchmark, n = %lld (bipartite side %lld), %d threads\n",
              static_cast<long long>(n), static_cast<long long>(n * n), omp_get_max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  Rng rng(7);
  const CMatrix a = rng.cmatrix(n, n);
  const CMatrix b = rng.cmatrix(n, n);
  const BipartiteOperator big(n, n, rng.cmatrix(n * n, n * n));
  const CMatrix u = rng.cmatrix(n * n, 8);
  const CMatrix v = rng.cmatrix(n * n, 8);

  volatile double sink = 0.0;

  report("kron",
         time_ms([&] { sink += ref::kron(a, b)(0, 0).real(); }, reps),
         time_ms([&] { sink += kron(a, b)(0, 0).real(); }, reps));

  report("partial_trace",
         time_ms([&] { sink += ref::partial_trace(big, Side::First)(0, 0).real(); }, reps),
         time_ms([&] { sink += partial_trace(big, Side::First)(0, 0).real(); }, reps));

  report("partial_transpose",
         time_ms([&] { sink += ref::partial_transpose(big, Side::Second).mat(0, 0).real(); }, reps),
         time_ms([&] { sink += partial_transpose(big, Side::Second).mat(0, 0).real(); }, reps));

  const auto f = [&](const CMatrix& block) { return CMatrix(a * block * b); };
  report("apply_blockwise",
         time_ms([&] { sink += ref::apply_blockwise(big, f).mat(0, 0).real(); }, reps),
         time_ms([&] { sink += apply_blockwise(big, f).mat(0, 0).real(); }, reps));

  report("outer_accumulate",
         time_ms([&] { sink += ref::outer_accumulate(u, v)(0, 0).real(); }, reps),
         time_ms([&] { sink += outer_accumulate(u, v)(0, 0).real(); }, reps));

  (void)sink;
  return 0;
}
