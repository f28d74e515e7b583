/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <cstddef>
#include <vector>

#include "ergocert/chain.hpp"
#include "ergocert/core.hpp"
#include "ergocert/kernels.hpp"

namespace ergocert {

// A (possibly signed) measure as mass per state.
struct SignedMeasureVec {
  Vec mu;
};

// A real-valued function on the state space.
struct FunctionVec {
  Vec f;
};

// A weight function V with V[x] >= 1 everywhere.
class WeightFunction {
 public:
  WeightFunction() = default;  // empty placeholder (e.g. in unset certificates)
  static WeightFunction ones(std::size_t n);
  // Throws VBelowOne if any entry is < 1 or non-finite.
  static WeightFunction from(Vec v);

  const Vec& values() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::size_t size() const { return v_.size(); }

 private:
  explicit WeightFunction(Vec v) : v_(std::move(v)) {}
  Vec v_;
};

// Half the L1 distance between two probability vectors (equals the
// sup-over-events form).  Throws NotProbability, DimensionMismatch.
double tv_distance(const SignedMeasureVec& mu1, const SignedMeasureVec& mu2);

// The L^p(pi) norm of a signed measure, p >= 1:
//   - mu absolutely continuous w.r.t. pi: (sum |mu/pi|^p pi)^{1/p}
//   - otherwise p = 1: total mass |mu|(X) = mu+(X) + mu-(X)
//   - otherwise p > 1: +infinity (a value, not an error)
double lp_norm(const SignedMeasureVec& mu, const StationaryDist& pi, double p);

// |f|_V = max_x |f[x]| / V[x].
double v_norm_fn(const FunctionVec& f, const WeightFunction& V);

// V-norm of a signed measure: sup_{|f| <= V} |mu(f)| = sum_x |mu[x]| V[x].
double v_norm_measure(const SignedMeasureVec& mu, const WeightFunction& V);

// Operator norm on the weighted sup space: max_x (1/V[x]) sum_y |K(x,y)| V[y].
double op_norm_linf_v(const Matrix& K, const WeightFunction& V,
                      kernels::Exec exec = kernels::Exec::Auto);

// Operator norm on the zero-pi-mean weighted sup space:
// max_x (1/V[x]) min_c sum_y |K(x,y) - c pi[y]| V[y]  (exact weighted median
// per row).  Invariant under per-row shifts K(x,.) += u[x] * pi.
double op_norm_linf_v0(const Matrix& K, const WeightFunction& V,
                       const StationaryDist& pi,
                       kernels::Exec exec = kernels::Exec::Auto);

// Operator norm of mu -> mu K on L^2(pi): the largest singular value of
// D^{1/2} K D^{-1/2}, D = diag(pi), via a symmetric eigensolve of the Gram
// matrix.  Throws ZeroStationaryMass if some pi[x] <= 0.
double l2_measure_norm_of_operator(const Matrix& K, const StationaryDist& pi);

// ||mu||_{L^2(pi)} of a measure absolutely continuous w.r.t. pi
// (+infinity otherwise).
double l2_measure_norm(const SignedMeasureVec& mu, const StationaryDist& pi);

}  // namespace ergocert
