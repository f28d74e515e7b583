/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <string>
#include <vector>

#include "ergocert/core.hpp"
#include "ergocert/kernels.hpp"

namespace ergocert {

// A validated finite Markov chain: labelled states and a row-stochastic
// kernel P (rows renormalised to sum exactly 1 at construction).
struct ChainSpec {
  std::vector<std::string> states;
  Matrix P;
  double row_tol = 1e-9;

  std::size_t size() const { return P.size(); }
};

// Probability vector fixed by the kernel: pi P = pi.
struct StationaryDist {
  Vec pi;
};

struct StructureReport {
  bool irreducible = false;
  long period = 1;
  bool aperiodic = false;
  bool reversible = false;
  long num_recurrent_classes = 0;
  // max_{x,y} |pi_x P(x,y) - pi_y P(y,x)| / max entry, when irreducible.
  double reversibility_residual = 0.0;
};

// Validates entries and row sums (within row_tol), renormalises each row to
// sum exactly 1, and attaches labels (defaults to "s0", "s1", ...).
// Throws: NegativeEntry, RowSumOutOfTolerance (names the row),
// DimensionMismatch, BadParameters (duplicate labels, empty matrix).
ChainSpec validate_chain(const Matrix& raw,
                         std::vector<std::string> labels = {},
                         double row_tol = 1e-9);

// Unique stationary distribution of an irreducible chain, by LU solve of
// (P^T - I) pi = 0 with one row replaced by the normalisation constraint.
// Residual ||pi P - pi||_inf <= 1e-12 * N.  Throws NotIrreducible.
StationaryDist stationary(const ChainSpec& chain);

// Irreducibility (strong connectivity of the support digraph), period of the
// class containing state 0 (gcd of closed-walk length mismatches over a BFS
// levelling), reversibility (detailed-balance residual against the
// stationary distribution; only meaningful when irreducible), and the number
// of recurrent classes (sink components of the condensation).
StructureReport structure(const ChainSpec& chain);

// P^n by repeated squaring, n >= 1.  Throws BadParameters.
Matrix kernel_power(const ChainSpec& chain, long n,
                    kernels::Exec exec = kernels::Exec::Auto);

// The rank-one kernel 1 (x) pi: every row equals pi.
Matrix stationary_projector(const StationaryDist& pi);

// P - 1 (x) pi: the part of the dynamics orthogonal to stationarity;
// (P - Pi)^n = P^n - Pi, which is what every decay computation powers.
Matrix deviation_kernel(const ChainSpec& chain, const StationaryDist& pi);

}  // namespace ergocert
