/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ergocert/chain.hpp"
#include "ergocert/core.hpp"
#include "ergocert/norms.hpp"

namespace ergocert {

using StateSet = std::vector<std::size_t>;  // sorted, unique

// Minorisation evidence: nu[y] = min_{x in S} P^m(x,y); S is small iff the
// common mass (volume) is positive.
struct SmallSetCert {
  StateSet S;
  long m = 1;
  Vec nu;
  double volume = 0.0;

  bool small() const { return volume > 0.0; }
};

// Return-time moment bounds for S: kappa_star = 1 / r(Q) (Q = kernel
// restricted to the complement of S), mgf[x] = E_x[kappa^{tau_S}] for x in S
// and the hitting-time value E_x[kappa^{sigma_S}] for x outside S.
struct ReturnTimeCert {
  StateSet S;
  double kappa_star = 0.0;  // +infinity when Q is nilpotent/empty
  double kappa = 0.0;
  Vec mgf;
  double taboo_radius = 0.0;
};

// Drift evidence: P V <= lambda V + b on S (pointwise), with the stationary
// moments pi(V^j) recorded for the requested j.
struct DriftCert {
  WeightFunction V;
  StateSet S;
  double lambda = 0.0;
  double b = 0.0;
  std::map<long, double> pi_V_moments;
};

struct DriftResult {
  bool accepted = false;
  double lambda = 1.0;  // the failing rate when rejected
  DriftCert cert;       // populated only when accepted
};

// Entrywise minimum of the rows of P^m over S.  Throws EmptySet.
SmallSetCert minorization(const ChainSpec& chain, const StateSet& S, long m);

// Spectral radius of the taboo kernel Q (power iteration with a
// squaring-based fallback on stagnation); 0 for empty or nilpotent Q.
double taboo_spectral_radius(const ChainSpec& chain, const StateSet& S);

// 1 / r(Q), +infinity when r(Q) = 0.
double kappa_star(const ChainSpec& chain, const StateSet& S);

// Geometric moment of the return time to S at rate kappa > 1: solves
// (I - kappa Q) h = kappa r with r[y] = P(y, S), then
// E_x[kappa^{tau_S}] = kappa (P(x,S) + sum_{y not in S} P(x,y) h[y]).
// Throws EmptySet, NotIrreducible, KappaBeyondRadius, BadParameters.
ReturnTimeCert return_time_mgf(const ChainSpec& chain, const StateSet& S,
                               double kappa);

// Checks P V <= lambda V + b 1_S with the best (smallest) lambda off S.
// Rejects (accepted = false) when lambda >= 1.  S must be small
// (minorisation volume > 0 for some m <= N).  When S is the whole space the
// convention lambda = 1/2 applies.  Throws SNotSmall, VBelowOne,
// NotIrreducible, EmptySet.
DriftResult verify_drift(const ChainSpec& chain, const WeightFunction& V,
                         const StateSet& S,
                         const std::vector<long>& j_set = {1, 2, 3, 5});

// Builds the canonical drift function from return times:
// V[x] = E_x[kappa^{sigma_S}] (= 1 on S), giving P V = V / kappa exactly off
// S, lambda = 1/kappa, b = max_{x in S}(P V - V/kappa).  Errors propagate
// from return_time_mgf.
DriftCert synthesize_drift(const ChainSpec& chain, const StateSet& S,
                           double kappa,
                           const std::vector<long>& j_set = {1, 2, 3, 5});

// Jensen transform: V^{1/j}, lambda^{1/j}, b^{1/j} is again a valid drift
// certificate (concavity of t^{1/j}); moments are recomputed for the new V.
DriftCert drift_power(const ChainSpec& chain, const DriftCert& cert, long j);

// Default kappa: the geometric midpoint sqrt(kappa_star) when finite, else 2.
double default_kappa(double kappa_star_value);

// Default small set: singleton holding the state of maximal stationary mass
// (smallest index on ties).
StateSet default_small_set(const StationaryDist& pi);

}  // namespace ergocert
