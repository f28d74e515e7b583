/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include <benchmark/benchmark.h>

#include "ergocert/kernels.hpp"
#include "ergocert/zoo.hpp"

namespace {

using ergocert::Matrix;
using ergocert::Vec;
using ergocert::kernels::Exec;

Matrix dense_kernel(long n) {
  return ergocert::generate(ergocert::ZooRecipe::random_dense(n, 7)).P;
}

void bench_matmul(benchmark::State& state, Exec exec) {
  const Matrix A = dense_kernel(state.range(0));
  Matrix C(A.size());
  for (auto _ : state) {
    ergocert::kernels::matmul(C, A, A, exec);
    benchmark::DoNotOptimize(C.data());
  }
}

void bench_jacobi(benchmark::State& state, Exec exec) {
  const long n = state.range(0);
  // Symmetrise a dense kernel to get a full symmetric matrix.
  Matrix A = dense_kernel(n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < i; ++j) {
      const double m = 0.5 * (A(i, j) + A(j, i));
      A(i, j) = m;
      A(j, i) = m;
    }
  for (auto _ : state) {
    Vec d = ergocert::kernels::jacobi_eigenvalues(A, exec);
    benchmark::DoNotOptimize(d.data());
  }
}

void bench_v0_norm(benchmark::State& state, Exec exec) {
  const long n = state.range(0);
  const Matrix A = dense_kernel(n);
  const Vec V(n, 1.0);
  const Vec pi(n, 1.0 / static_cast<double>(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ergocert::kernels::linf_v0_norm(A, V, pi, exec));
  }
}

void matmul_serial(benchmark::State& s) { bench_matmul(s, Exec::Serial); }
void matmul_parallel(benchmark::State& s) { bench_matmul(s, Exec::Parallel); }
void jacobi_serial(benchmark::State& s) { bench_jacobi(s, Exec::Serial); }
void jacobi_parallel(benchmark::State& s) { bench_jacobi(s, Exec::Parallel); }
void v0_serial(benchmark::State& s) { bench_v0_norm(s, Exec::Serial); }
void v0_parallel(benchmark::State& s) { bench_v0_norm(s, Exec::Parallel); }

}  // namespace

BENCHMARK(matmul_serial)->Arg(64)->Arg(192)->Arg(384);
BENCHMARK(matmul_parallel)->Arg(64)->Arg(192)->Arg(384);
BENCHMARK(jacobi_serial)->Arg(64)->Arg(192);
BENCHMARK(jacobi_parallel)->Arg(64)->Arg(192);
BENCHMARK(v0_serial)->Arg(64)->Arg(384);
BENCHMARK(v0_parallel)->Arg(64)->Arg(384);

BENCHMARK_MAIN();
