/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ergocert/chain.hpp"
#include "ergocert/core.hpp"
#include "ergocert/norms.hpp"

namespace ergocert {

enum class NormSpace { LinfV, LinfV0, L2pi, PiPerp };

const char* norm_space_name(NormSpace s) noexcept;

// A weighted operator norm, bundled with the data it needs so radius
// routines can evaluate it on arbitrary matrices.
class OperatorNorm {
 public:
  static OperatorNorm linf_v(WeightFunction V);
  static OperatorNorm linf_v0(WeightFunction V, StationaryDist pi);
  static OperatorNorm l2pi(StationaryDist pi);

  // Throws NormEvaluation when pi has a zero where the norm needs mass.
  double operator()(const Matrix& K) const;

  NormSpace space() const { return space_; }
  const StationaryDist& pi() const { return pi_; }

 private:
  OperatorNorm(NormSpace s, WeightFunction V, StationaryDist pi)
      : space_(s), v_(std::move(V)), pi_(std::move(pi)) {}
  NormSpace space_;
  WeightFunction v_;
  StationaryDist pi_;
};

struct SpectralReport {
  double radius = 0.0;
  NormSpace norm_space = NormSpace::LinfV;
  // (n, ||K^n||^{1/n}) at n = 1, 2, 4, 8, ...
  std::vector<std::pair<long, double>> gelfand_iterates;
  bool converged = false;
  std::optional<long> eigenvalue_one_multiplicity;
};

struct GelfandOptions {
  long n_max = 1L << 20;
  double tol = 1e-8;
  kernels::Exec exec = kernels::Exec::Auto;
};

// Spectral radius estimate r = inf_n ||K^n||^{1/n} by repeated squaring with
// max-entry rescaling (scale factors tracked in log space).  Stops at the
// first k where successive estimates differ by < tol, or when 2^k reaches
// n_max (converged = false, last bracket reported).
//
// With the LinfV0 norm the radius is that of the operator restricted to the
// zero-pi-mean subspace: the iterate seed is K (I - 1 (x) pi), which is a
// no-op for zero-row-sum K and maps a stochastic P to P - Pi.  Powering P
// directly would sink the decaying part into rounding noise.
SpectralReport gelfand_radius(const Matrix& K, const OperatorNorm& norm,
                              const GelfandOptions& opt = {});

// Geometric multiplicity of eigenvalue 1: N - rank(P - I), rank by
// column-pivoted QR with absolute threshold 1e-10 * N * max|entry|.
// Works on reducible chains (each recurrent class contributes 1).
long eigenvalue_one_multiplicity(const ChainSpec& chain);

struct ReversibleSpectrum {
  Vec eigenvalues;  // sorted ascending, all real in [-1, 1] up to rounding
  double gap = 0.0;        // 1 - max{|l| : l != l_top, one copy removed}
  long top_multiplicity = 1;
};

// Eigenvalues of the symmetrisation A = D^{1/2} P D^{-1/2} (symmetric by
// detailed balance) via the Jacobi kernel.  Throws NotReversible with the
// residual when detailed balance fails.
ReversibleSpectrum reversible_spectrum(const ChainSpec& chain,
                                       const StationaryDist& pi);

// max |eigenvalue| of A restricted to the orthogonal complement of sqrt(pi)
// (deflate the known top eigenvector, take the largest remaining modulus).
// Equals both ||P - Pi||_{L^2(pi)} and the operator norm of P on the
// zero-total-mass subspace.  Throws NotReversible.
double pi_perp_norm(const ChainSpec& chain, const StationaryDist& pi);

}  // namespace ergocert
