/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ergocert/core.hpp"

// Dense compute kernels.  Every kernel has a serial reference path and an
// OpenMP path selected by Exec; the two are bit-identical by construction
// (identical per-element arithmetic order, exact max/disjoint-write
// reductions), so tests compare them with operator== and benchmarks compare
// their speed.
namespace ergocert::kernels {

enum class Exec { Serial, Parallel, Auto };

// Number of worker threads the Parallel path would use (1 when built without
// OpenMP).
int hardware_threads();

// C = A * B.  C must not alias A or B.
void matmul(Matrix& C, const Matrix& A, const Matrix& B, Exec exec = Exec::Auto);

Matrix matmul(const Matrix& A, const Matrix& B, Exec exec = Exec::Auto);

// max_{i,j} |A(i,j)|
double max_abs(const Matrix& A);

// A matrix known only up to an exponential scale: represents
// exp(log_scale) * M = K^n for the power routines below.  Rescaling by the
// max-abs entry after every multiply keeps entries O(1) at any depth, so
// norms of deep powers retain full relative precision instead of drowning in
// the 1e-16 additive floor.
struct ScaledPower {
  Matrix M;
  double log_scale = 0.0;
  long n = 0;

  bool is_zero() const;  // exact zero matrix (nilpotent powers land here)
};

// Pull the max-abs entry of M into log_scale (no-op on the zero matrix).
void rescale(ScaledPower& p);

// Squaring step: (K^n) -> (K^{2n}), rescaled.
ScaledPower scaled_square(const ScaledPower& p, Exec exec = Exec::Auto);

// Walks K^1, K^2, K^3, ... by successive right-multiplication with K,
// rescaling at every step.
class PowerWalk {
 public:
  explicit PowerWalk(Matrix K, Exec exec = Exec::Auto);

  const ScaledPower& current() const { return cur_; }
  const ScaledPower& step();

 private:
  Matrix k_;
  ScaledPower cur_;
  Matrix scratch_;
  Exec exec_;
};

// Per-row weighted absolute sums: out[x] = sum_y |K(x,y)| * w[y].
Vec row_abs_weighted_sums(const Matrix& K, const Vec& w, Exec exec = Exec::Auto);

// max_x (1/V[x]) * sum_y |K(x,y)| * V[y]
double linf_v_norm(const Matrix& K, const Vec& V, Exec exec = Exec::Auto);

// max_x (1/V[x]) * min_c sum_y |K(x,y) - c*pi[y]| * V[y].
// The inner minimisation is an exact weighted-median problem: terms with
// pi[y] > 0 are |c - K(x,y)/pi[y]| weighted by pi[y]*V[y]; terms with
// pi[y] = 0 are constants.
double linf_v0_norm(const Matrix& K, const Vec& V, const Vec& pi,
                    Exec exec = Exec::Auto);

// Eigenvalues of a symmetric matrix by two-phase round-robin Jacobi.
// Rounds of disjoint rotation pairs are applied as a row phase followed by a
// column phase, so the Parallel path writes disjoint rows/columns and is
// bit-identical to the Serial path.  Sweeps run until the off-diagonal
// Frobenius norm drops below off_tol (absolute) or max_sweeps is hit.
// Returned values are unsorted (diagonal order).
Vec jacobi_eigenvalues(Matrix A, Exec exec = Exec::Auto,
                       double off_tol = 1e-12, int max_sweeps = 64);

// Off-diagonal Frobenius norm (for tests and convergence checks).
double offdiag_frobenius(const Matrix& A);

}  // namespace ergocert::kernels
