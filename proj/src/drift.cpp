/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/drift.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergocert/kernels.hpp"

namespace ergocert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sorted, de-duplicated, bounds-checked copy of a state set.
StateSet canonical_set(const StateSet& S, std::size_t n) {
  if (S.empty()) fail(Err::EmptySet, "state set is empty");
  StateSet out = S;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.back() >= n)
    fail(Err::BadParameters,
         "state index " + std::to_string(out.back()) + " out of range");
  return out;
}

std::vector<char> membership(const StateSet& S, std::size_t n) {
  std::vector<char> in(n, 0);
  for (std::size_t s : S) in[s] = 1;
  return in;
}

// The taboo kernel Q: P restricted to rows and columns outside S.
Matrix taboo_kernel(const ChainSpec& chain, const std::vector<char>& in_S,
                    std::vector<std::size_t>& outside) {
  const std::size_t n = chain.size();
  outside.clear();
  for (std::size_t x = 0; x < n; ++x)
    if (!in_S[x]) outside.push_back(x);
  Matrix Q(outside.size());
  for (std::size_t i = 0; i < outside.size(); ++i)
    for (std::size_t j = 0; j < outside.size(); ++j)
      Q(i, j) = chain.P(outside[i], outside[j]);
  return Q;
}

void require_irreducible(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const double p = forward ? chain.P(u, v) : chain.P(v, u);
        if (p > 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return seen;
  };
  const auto fwd = reach(true);
  const auto bwd = reach(false);
  for (std::size_t x = 0; x < n; ++x)
    if (!fwd[x] || !bwd[x])
      fail(Err::NotIrreducible,
           "state " + std::to_string(x) + " does not communicate with state 0");
}

std::map<long, double> stationary_moments(const StationaryDist& pi,
                                          const Vec& V,
                                          const std::vector<long>& j_set) {
  std::map<long, double> moments;
  for (long j : j_set) {
    if (j < 1) fail(Err::BadParameters, "moment order must be >= 1");
    double s = 0.0;
    for (std::size_t x = 0; x < V.size(); ++x)
      s += pi.pi[x] * std::pow(V[x], static_cast<double>(j));
    moments[j] = s;
  }
  return moments;
}

}  // namespace

SmallSetCert minorization(const ChainSpec& chain, const StateSet& S, long m) {
  if (m < 1) fail(Err::BadParameters, "minorisation power must be >= 1");
  const StateSet set = canonical_set(S, chain.size());
  const Matrix Pm = kernel_power(chain, m);
  SmallSetCert cert;
  cert.S = set;
  cert.m = m;
  cert.nu.assign(chain.size(), 0.0);
  for (std::size_t y = 0; y < chain.size(); ++y) {
    double lo = kInf;
    for (std::size_t x : set) lo = std::min(lo, Pm(x, y));
    cert.nu[y] = lo;
    cert.volume += lo;
  }
  return cert;
}

double taboo_spectral_radius(const ChainSpec& chain, const StateSet& S) {
  const StateSet set = canonical_set(S, chain.size());
  const auto in_S = membership(set, chain.size());
  std::vector<std::size_t> outside;
  const Matrix Q = taboo_kernel(chain, in_S, outside);
  const std::size_t m = Q.size();
  if (m == 0) return 0.0;

  // Power iteration from the all-ones vector with Collatz-Wielandt bounds:
  // for strictly positive v the Perron root lies between the smallest and
  // largest entrywise ratio (Qv)_i / v_i, so closure of that sandwich is a
  // certificate of convergence rather than a heuristic.  (A successive-
  // difference test fails here: when only a few rows of Q leak mass, the
  // step ratio can sit at an exact plateau for arbitrarily many iterations
  // while the deficit diffuses through the state graph.)  Nilpotent Q drives
  // the iterate to exact zero; a zero entry in v invalidates the lower bound,
  // in which case the loop runs to the cap and the squaring fallback decides.
  Vec v(m, 1.0), w(m, 0.0);
  bool sandwich_valid = true;
  constexpr long kMaxIters = 100000;
  for (long it = 0; it < kMaxIters; ++it) {
    double top = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      const double* q = Q.row(i);
      for (std::size_t j = 0; j < m; ++j) s += q[j] * v[j];
      w[i] = s;
      top = std::max(top, s);
    }
    if (top == 0.0) return 0.0;
    double lower = kInf, upper = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (v[i] > 0.0) {
        const double ratio = w[i] / v[i];
        lower = std::min(lower, ratio);
        upper = std::max(upper, ratio);
      } else {
        sandwich_valid = false;
      }
    }
    if (sandwich_valid && upper - lower <= 1e-12 * upper) return upper;
    for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / top;
  }

  // Stagnation (periodic, defective, or slowly-leaking Q): fall back to the
  // norm-root limit by repeated squaring.  ||Q^n||_inf^{1/n} >= r is exact to
  // ~|log c|/n, so sixty squarings (n = 2^60) land far past the tolerance.
  // No early exit: the norm can plateau at 1 while absorption mass is still
  // building up, so run the fixed schedule.
  kernels::ScaledPower p;
  p.M = Q;
  p.n = 1;
  kernels::rescale(p);
  Vec ones(m, 1.0);
  double est = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double nm = kernels::linf_v_norm(p.M, ones);
    if (nm == 0.0) return 0.0;
    est = std::exp((std::log(nm) + p.log_scale) / static_cast<double>(p.n));
    if (k + 1 < 60) p = kernels::scaled_square(p);
  }
  return est;
}

double kappa_star(const ChainSpec& chain, const StateSet& S) {
  const double r = taboo_spectral_radius(chain, S);
  return r > 0.0 ? 1.0 / r : kInf;
}

ReturnTimeCert return_time_mgf(const ChainSpec& chain, const StateSet& S,
                               double kappa) {
  if (!(kappa > 1.0)) fail(Err::BadParameters, "kappa must be > 1");
  const std::size_t n = chain.size();
  const StateSet set = canonical_set(S, n);
  require_irreducible(chain);

  ReturnTimeCert cert;
  cert.S = set;
  cert.kappa = kappa;
  cert.taboo_radius = taboo_spectral_radius(chain, set);
  cert.kappa_star = cert.taboo_radius > 0.0 ? 1.0 / cert.taboo_radius : kInf;
  if (kappa * cert.taboo_radius >= 1.0)
    fail(Err::KappaBeyondRadius,
         "kappa " + std::to_string(kappa) + " >= kappa_star " +
             std::to_string(cert.kappa_star));

  const auto in_S = membership(set, n);
  std::vector<std::size_t> outside;
  const Matrix Q = taboo_kernel(chain, in_S, outside);
  const std::size_t m = Q.size();

  // Hitting-time transform h[y] = E_y[kappa^{sigma_S}] for y outside S:
  // (I - kappa Q) h = kappa r with r[y] = P(y, S).
  Vec h(m, 0.0);
  if (m > 0) {
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j)
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            (i == j ? 1.0 : 0.0) - kappa * Q(i, j);
      double r = 0.0;
      for (std::size_t s : set) r += chain.P(outside[i], s);
      rhs(static_cast<Eigen::Index>(i)) = kappa * r;
    }
    const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    for (std::size_t i = 0; i < m; ++i)
      h[i] = sol(static_cast<Eigen::Index>(i));
  }

  cert.mgf.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) cert.mgf[outside[i]] = h[i];
  for (std::size_t x : set) {
    double s = 0.0;
    for (std::size_t y : set) s += chain.P(x, y);  // one-step return mass
    for (std::size_t i = 0; i < m; ++i) s += chain.P(x, outside[i]) * h[i];
    cert.mgf[x] = kappa * s;
  }
  return cert;
}

DriftResult verify_drift(const ChainSpec& chain, const WeightFunction& V,
                         const StateSet& S, const std::vector<long>& j_set) {
  const std::size_t n = chain.size();
  if (V.size() != n)
    fail(Err::DimensionMismatch, "weight length vs chain size");
  const StateSet set = canonical_set(S, n);
  require_irreducible(chain);

  // S must be small: some power of P puts common mass under every start in S.
  bool small = false;
  for (long m = 1; m <= static_cast<long>(n) && !small; ++m)
    small = minorization(chain, set, m).small();
  if (!small)
    fail(Err::SNotSmall,
         "no minorisation with positive volume found for m <= " +
             std::to_string(n));

  const auto in_S = membership(set, n);
  Vec PV(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < n; ++y) s += chain.P(x, y) * V[y];
    PV[x] = s;
  }

  // Best (smallest) geometric rate supported off S; the convention
  // lambda = 1/2 covers S = whole space, where the constraint is vacuous.
  double lambda = 0.5;
  if (set.size() < n) {
    lambda = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      if (!in_S[x]) lambda = std::max(lambda, PV[x] / V[x]);
  }

  DriftResult result;
  result.lambda = lambda;
  if (lambda >= 1.0) {
    result.accepted = false;
    return result;
  }
  double b = 0.0;
  for (std::size_t x : set) b = std::max(b, PV[x] - lambda * V[x]);
  b = std::max(b, 0.0);

  result.accepted = true;
  result.cert.V = V;
  result.cert.S = set;
  result.cert.lambda = lambda;
  result.cert.b = b;
  result.cert.pi_V_moments =
      stationary_moments(stationary(chain), V.values(), j_set);
  return result;
}

DriftCert synthesize_drift(const ChainSpec& chain, const StateSet& S,
                           double kappa, const std::vector<long>& j_set) {
  const ReturnTimeCert rt = return_time_mgf(chain, S, kappa);
  const std::size_t n = chain.size();
  const auto in_S = membership(rt.S, n);

  Vec v(n, 1.0);
  for (std::size_t x = 0; x < n; ++x)
    if (!in_S[x]) v[x] = rt.mgf[x];  // hitting-time transform off S

  DriftCert cert;
  cert.V = WeightFunction::from(std::move(v));
  cert.S = rt.S;
  cert.lambda = 1.0 / kappa;
  double b = 0.0;
  for (std::size_t x : rt.S) {
    double pv = 0.0;
    for (std::size_t y = 0; y < n; ++y) pv += chain.P(x, y) * cert.V[y];
    b = std::max(b, pv - cert.V[x] / kappa);
  }
  cert.b = std::max(b, 0.0);
  cert.pi_V_moments =
      stationary_moments(stationary(chain), cert.V.values(), j_set);
  return cert;
}

DriftCert drift_power(const ChainSpec& chain, const DriftCert& cert, long j) {
  if (j < 1) fail(Err::BadParameters, "power index must be >= 1");
  const double inv = 1.0 / static_cast<double>(j);
  Vec v(cert.V.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = std::pow(cert.V[x], inv);

  // Concavity of t^{1/j} on [0, inf) gives P(V^{1/j}) <= (PV)^{1/j} and
  // (s + t)^{1/j} <= s^{1/j} + t^{1/j}, so the transformed triple is again a
  // valid drift certificate.
  DriftCert out;
  out.V = WeightFunction::from(std::move(v));
  out.S = cert.S;
  out.lambda = std::pow(cert.lambda, inv);
  out.b = std::pow(cert.b, inv);
  std::vector<long> j_set;
  for (const auto& [key, unused] : cert.pi_V_moments) j_set.push_back(key);
  if (j_set.empty()) j_set = {1};
  out.pi_V_moments =
      stationary_moments(stationary(chain), out.V.values(), j_set);
  return out;
}

double default_kappa(double kappa_star_value) {
  if (!std::isfinite(kappa_star_value)) return 2.0;
  if (!(kappa_star_value > 1.0))
    fail(Err::BadParameters, "kappa_star must exceed 1");
  return std::sqrt(kappa_star_value);
}

StateSet default_small_set(const StationaryDist& pi) {
  if (pi.pi.empty()) fail(Err::EmptySet, "empty stationary distribution");
  std::size_t best = 0;
  for (std::size_t x = 1; x < pi.pi.size(); ++x)
    if (pi.pi[x] > pi.pi[best]) best = x;
  return {best};
}

}  // namespace ergocert
