/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ergocert/chain.hpp"
#include "ergocert/core.hpp"
#include "ergocert/drift.hpp"
#include "ergocert/norms.hpp"
#include "ergocert/spectral.hpp"

namespace ergocert {

// The thirty-three equivalent characterisations of geometric ergodicity that
// this project evaluates, numbered i..xxxiii.  xxvii..xxxiii additionally
// require reversibility and are reported not-applicable otherwise.
//
//   i/ii      pointwise / almost-everywhere TV decay
//   iii/iv    TV decay from L^p starting measures (some p / all p)
//   v         TV decay started from the restriction of pi to a small set
//   vi        finite geometric moment of the return time to a small set
//   vii/viii  drift condition P V <= lambda V + b 1_S (+ all moments)
//   ix..xii   V-uniform decay, pointwise and from measures with mu(V) < inf
//   xiii/xiv  spectral gap on the weighted sup space
//   xv..xviii Gelfand spectral radii (of P - Pi on L^inf_V; of P on the
//             zero-mean subspace)
//   xix..xxii some power has weighted operator norm < 1
//   xxiii..xxvi geometric decay of the weighted operator norm sequence
//   xxvii..xxxiii the L^2(pi) block: measure decay, spectral gap, radii and
//             norms of P - Pi and of P on the zero-total-mass subspace
enum class ConditionId : int {
  i = 1, ii, iii, iv, v, vi, vii, viii, ix, x, xi, xii, xiii, xiv, xv, xvi,
  xvii, xviii, xix, xx, xxi, xxii, xxiii, xxiv, xxv, xxvi, xxvii, xxviii,
  xxix, xxx, xxxi, xxxii, xxxiii,
};

inline constexpr int kNumConditions = 33;

bool requires_reversible(ConditionId id) noexcept;
const char* roman(ConditionId id) noexcept;
std::optional<ConditionId> condition_from_roman(std::string_view name);

struct GeometricRate {
  double rho = 0.0;
  double C = 0.0;
  Vec C_x;  // per-state constants where applicable
};

struct NormBound {
  long m = 0;
  double value = 0.0;
};

enum class Outcome { Holds, Fails, NotApplicable };

const char* outcome_name(Outcome o) noexcept;

struct Verdict {
  ConditionId id{};
  Outcome outcome = Outcome::NotApplicable;
  std::variant<std::monostate, GeometricRate, DriftCert, ReturnTimeCert,
               SpectralReport, NormBound>
      certificate;
  std::map<std::string, double> diagnostics;

  bool holds() const { return outcome == Outcome::Holds; }
};

struct FitResult {
  double rho = 0.0;
  double C = 0.0;
  bool geometric = false;  // rho < 1 - 1e-6
  long points_used = 0;
};

// Least-squares fit of value ~ C * rho^n on the (inclusive) window of n.
// Zeros are ignored in the slope fit; C = max_n value / rho^n over all
// observed n (max value when rho = 0).  All-zero input yields (0, 0).
// Throws EmptyWindow when the window contains no observed n.
FitResult fit_geometric_rate(const std::vector<std::pair<long, double>>& decay,
                             std::pair<long, long> window);

struct ConditionConfig {
  long n_max = 256;
  std::vector<long> j_set = {1, 2, 3, 5};
  std::vector<double> p_set = {1.5, 2, 4};
  double rate_tol = 1e-3;
  std::uint64_t seed = 12345;
  kernels::Exec exec = kernels::Exec::Auto;
};

// Thresholds separating genuine geometric decay from numerically stagnant
// sequences, and re-verification slack for certificates.
inline constexpr double kRateHoldsTol = 1e-6;   // holds iff rho < 1 - this
inline constexpr double kNormHoldsTol = 1e-9;   // m-search: norm < 1 - this
inline constexpr double kReverifyTol = 1e-9;

// Conditions i and ii from per-state TV decay fits.
std::vector<Verdict> cond_pointwise_tv(const ChainSpec& chain,
                                       const StationaryDist& pi, long n_max,
                                       kernels::Exec exec = kernels::Exec::Auto);

// Single-measure TV decay probe (building block of iii/iv/v).
// Throws MeasureNotInLp when ||mu||_{L^p(pi)} is infinite.
Verdict cond_measure_tv(const ChainSpec& chain, const StationaryDist& pi,
                        const SignedMeasureVec& mu, double p, long n_max,
                        kernels::Exec exec = kernels::Exec::Auto);

// V-uniform decay fit for one weight function (building block of ix..xii).
Verdict cond_v_uniform(const ChainSpec& chain, const StationaryDist& pi,
                       const WeightFunction& V, long n_max,
                       kernels::Exec exec = kernels::Exec::Auto);

// Conditions xiii..xxvi for one weight function.
std::vector<Verdict> cond_spectral(const ChainSpec& chain,
                                   const StationaryDist& pi,
                                   const WeightFunction& V,
                                   const std::vector<long>& j_set,
                                   long n_max,
                                   kernels::Exec exec = kernels::Exec::Auto);

// Conditions xxvii..xxxiii (not-applicable on non-reversible chains).
std::vector<Verdict> cond_reversible(const ChainSpec& chain,
                                     const StationaryDist& pi, long n_max,
                                     std::uint64_t seed = 12345,
                                     kernels::Exec exec = kernels::Exec::Auto);

// All 33 verdicts, evaluated over the weight-function battery
// {V = 1, synthesized drift V, drift V^{1/j} for j in j_set} and a seeded
// measure battery.  Throws NotIrreducible on reducible chains.
std::vector<Verdict> evaluate_conditions(const ChainSpec& chain,
                                         const StationaryDist& pi,
                                         const ConditionConfig& config);

struct EdgeCheck {
  ConditionId from{}, to{};
  enum class Status { Consistent, Violated, Skipped } status =
      Status::Consistent;
  std::string reason;  // set when skipped
};

struct RateSummary {
  // Fitted/computed decay rates with V = 1 (NaN when unavailable).
  double pointwise_tv = 0.0;
  double v_uniform = 0.0;
  double norm_decay = 0.0;
  double gelfand_linf_v = 0.0;
  double pi_perp = 0.0;      // reversible only
  double eigen_oracle = 0.0; // second-largest |eigenvalue|, reversible only
  double max_delta = 0.0;    // max |rate - oracle| over the comparable rates
  bool coherent = true;      // max_delta <= rate_tol (reversible only)
};

struct ConsistencyReport {
  StructureReport structure;
  std::vector<Verdict> verdicts;
  std::vector<EdgeCheck> edges;
  RateSummary rates;

  std::vector<EdgeCheck> violated_edges() const;
  const Verdict& verdict(ConditionId id) const;
};

// The directed implication edges among the conditions that the consistency
// check asserts (A -> B: "A holds and B fails" is a violation).
const std::vector<std::pair<ConditionId, ConditionId>>& implication_edges();

// Evaluates every applicable condition and asserts all implication edges.
// Edges touching the reversible block are skipped on non-reversible chains;
// edges touching the return-time/drift block (vi, vii, viii) are skipped on
// non-aperiodic chains, where those conditions hold without implying the
// others.  Rate coherence against the reversible eigen-oracle is recorded in
// the report (data, not an edge violation).
ConsistencyReport cross_validate(const ChainSpec& chain,
                                 const StationaryDist& pi,
                                 const ConditionConfig& config);

}  // namespace ergocert
