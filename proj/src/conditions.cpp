/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "ergocert/kernels.hpp"

namespace ergocert {

namespace {

constexpr const char* kRomanNames[kNumConditions] = {
    "i",    "ii",    "iii",   "iv",   "v",    "vi",   "vii",  "viii", "ix",
    "x",    "xi",    "xii",   "xiii", "xiv",  "xv",   "xvi",  "xvii", "xviii",
    "xix",  "xx",    "xxi",   "xxii", "xxiii","xxiv", "xxv",  "xxvi", "xxvii",
    "xxviii","xxix", "xxx",   "xxxi", "xxxii","xxxiii"};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Seq = std::vector<std::pair<long, double>>;

std::pair<long, long> fit_window(long n_max) {
  return {std::max(1L, n_max / 2), n_max};
}

std::string fmt_double_key(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Decay engine: a single scaled power walk of D = P - Pi yields every decay
// sequence at full relative precision arbitrarily deep (the rows of the
// scaled iterate never underflow, unlike directly propagated differences).
// General measures ride along as scaled vector iterates of u <- u D.
// ---------------------------------------------------------------------------

struct DecayData {
  std::vector<Seq> tv_rows;              // [x]   TV(P^n(x,.), pi)
  std::vector<Seq> op_v;                 // [vi]  ||P^n - Pi||_{Linf_V}
  std::vector<Seq> op_v0;                // [vi]  ||P^n||_{Linf_V0}
  std::vector<Seq> row_l2;               // [x]   ||delta_x P^n - pi||_{L2(pi)}
  std::vector<Seq> mu_tv;                // [mi]  TV(mu P^n, pi)
  std::vector<Seq> mu_l2;                // [mi]  ||mu P^n - pi||_{L2(pi)}
  std::vector<std::vector<Seq>> mu_v;    // [vi][mi] ||mu P^n - pi||_V / mu(V)
};

DecayData run_decay(const ChainSpec& chain, const StationaryDist& pi,
                    const std::vector<WeightFunction>& Vs,
                    const std::vector<SignedMeasureVec>& mus, long n_max,
                    bool want_l2, kernels::Exec exec) {
  if (n_max < 1) fail(Err::BadParameters, "n_max must be >= 1");
  const std::size_t N = chain.size();
  const std::size_t nv = Vs.size();
  const std::size_t nm = mus.size();

  DecayData d;
  d.tv_rows.resize(N);
  d.op_v.resize(nv);
  d.op_v0.resize(nv);
  if (want_l2) d.row_l2.resize(N);
  d.mu_tv.resize(nm);
  if (want_l2) d.mu_l2.resize(nm);
  d.mu_v.assign(nv, std::vector<Seq>(nm));

  const Matrix D = deviation_kernel(chain, pi);
  kernels::PowerWalk walk(D, exec);

  // mu(V) normalisers so one uniform constant certifies the measure family.
  std::vector<std::vector<double>> muV(nv, std::vector<double>(nm, 1.0));
  for (std::size_t vi = 0; vi < nv; ++vi)
    for (std::size_t mi = 0; mi < nm; ++mi) {
      double s = 0.0;
      for (std::size_t x = 0; x < N; ++x) s += mus[mi].mu[x] * Vs[vi][x];
      muV[vi][mi] = s;
    }

  // Scaled vector iterates u = (mu - pi) D^n.
  std::vector<Vec> u(nm, Vec(N, 0.0));
  std::vector<double> ulog(nm, 0.0);
  std::vector<char> udead(nm, 0);
  for (std::size_t mi = 0; mi < nm; ++mi) {
    double top = 0.0;
    for (std::size_t x = 0; x < N; ++x) {
      u[mi][x] = mus[mi].mu[x] - pi.pi[x];
      top = std::max(top, std::abs(u[mi][x]));
    }
    if (top == 0.0) {
      udead[mi] = 1;  // mu == pi: every subsequent value is exactly 0
    } else {
      for (double& e : u[mi]) e /= top;
      ulog[mi] = std::log(top);
    }
  }

  const Vec ones(N, 1.0);
  Vec scratch(N, 0.0);
  for (long n = 1; n <= n_max; ++n) {
    const auto& sp = (n == 1) ? walk.current() : walk.step();
    const double scale = std::exp(sp.log_scale);

    const Vec sums1 = kernels::row_abs_weighted_sums(sp.M, ones, exec);
    for (std::size_t x = 0; x < N; ++x)
      d.tv_rows[x].emplace_back(n, 0.5 * scale * sums1[x]);

    if (want_l2) {
      for (std::size_t x = 0; x < N; ++x) {
        double s = 0.0;
        const double* row = sp.M.row(x);
        for (std::size_t y = 0; y < N; ++y) s += row[y] * row[y] / pi.pi[y];
        d.row_l2[x].emplace_back(n, scale * std::sqrt(s));
      }
    }

    for (std::size_t vi = 0; vi < nv; ++vi) {
      const Vec sumsV =
          kernels::row_abs_weighted_sums(sp.M, Vs[vi].values(), exec);
      double top = 0.0;
      for (std::size_t x = 0; x < N; ++x)
        top = std::max(top, sumsV[x] / Vs[vi][x]);
      d.op_v[vi].emplace_back(n, scale * top);
      d.op_v0[vi].emplace_back(
          n, scale * kernels::linf_v0_norm(sp.M, Vs[vi].values(), pi.pi, exec));
    }

    for (std::size_t mi = 0; mi < nm; ++mi) {
      if (!udead[mi]) {
        // u <- u D, with explicit removal of the pi direction so rounding
        // mass injected by the multiply cannot accumulate on the eigenvalue-1
        // eigenvector and swamp the decaying part.
        double top = 0.0;
        for (std::size_t y = 0; y < N; ++y) {
          double s = 0.0;
          for (std::size_t x = 0; x < N; ++x) s += u[mi][x] * D(x, y);
          scratch[y] = s;
          top = std::max(top, std::abs(s));
        }
        if (top == 0.0) {
          udead[mi] = 1;
        } else {
          for (std::size_t y = 0; y < N; ++y) u[mi][y] = scratch[y] / top;
          ulog[mi] += std::log(top);
        }
      }
      if (udead[mi]) {
        d.mu_tv[mi].emplace_back(n, 0.0);
        if (want_l2) d.mu_l2[mi].emplace_back(n, 0.0);
        for (std::size_t vi = 0; vi < nv; ++vi)
          d.mu_v[vi][mi].emplace_back(n, 0.0);
        continue;
      }
      const double us = std::exp(ulog[mi]);
      double l1 = 0.0, l2sq = 0.0;
      for (std::size_t y = 0; y < N; ++y) {
        l1 += std::abs(u[mi][y]);
        if (want_l2) l2sq += u[mi][y] * u[mi][y] / pi.pi[y];
      }
      d.mu_tv[mi].emplace_back(n, 0.5 * us * l1);
      if (want_l2) d.mu_l2[mi].emplace_back(n, us * std::sqrt(l2sq));
      for (std::size_t vi = 0; vi < nv; ++vi) {
        double s = 0.0;
        for (std::size_t y = 0; y < N; ++y)
          s += std::abs(u[mi][y]) * Vs[vi][y];
        d.mu_v[vi][mi].emplace_back(n, us * s / muV[vi][mi]);
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Batteries.
// ---------------------------------------------------------------------------

std::vector<SignedMeasureVec> measure_battery(std::size_t n,
                                              const StateSet& S,
                                              const StationaryDist& pi,
                                              std::uint64_t seed) {
  std::vector<SignedMeasureVec> mus;
  // The restriction of pi to the small set, renormalised.
  Vec piS(n, 0.0);
  double mass = 0.0;
  for (std::size_t s : S) {
    piS[s] = pi.pi[s];
    mass += pi.pi[s];
  }
  if (mass <= 0.0) fail(Err::ZeroStationaryMass, "small set carries no mass");
  for (double& e : piS) e /= mass;
  mus.push_back({std::move(piS)});

  // Three random probability measures (normalised exponentials).
  Rng rng(seed);
  for (int k = 0; k < 3; ++k) {
    Vec mu(n, 0.0);
    double total = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      mu[x] = -std::log1p(-rng.uniform());
      total += mu[x];
    }
    if (total <= 0.0) {
      mu.assign(n, 1.0 / static_cast<double>(n));
    } else {
      for (double& e : mu) e /= total;
    }
    mus.push_back({std::move(mu)});
  }
  return mus;
}

StructureReport require_irreducible_structure(const ChainSpec& chain) {
  StructureReport srep = structure(chain);
  if (!srep.irreducible)
    fail(Err::NotIrreducible,
         "chain has " + std::to_string(srep.num_recurrent_classes) +
             " recurrent classes");
  return srep;
}

Verdict make_verdict(ConditionId id, bool holds) {
  Verdict v;
  v.id = id;
  v.outcome = holds ? Outcome::Holds : Outcome::Fails;
  return v;
}

// First step count m with value < 1 - kNormHoldsTol, or 0 when none.
std::pair<long, double> first_contraction(const Seq& seq) {
  for (const auto& [n, value] : seq)
    if (value < 1.0 - kNormHoldsTol) return {n, value};
  return {0, seq.empty() ? 0.0 : seq.back().second};
}

// Per-V evaluation shared by the spectral-block conditions xiii..xxvi.
struct PerV {
  FitResult fit_v;           // fit of ||P^n - Pi||_{Linf_V}
  FitResult fit_v0;          // fit of ||P^n||_{Linf_V0}
  long m_v = 0;              // first contraction step of the two sequences
  double m_v_value = 0.0;
  long m_v0 = 0;
  double m_v0_value = 0.0;
  SpectralReport rad_dev;    // Gelfand radius of P - Pi on Linf_V
  SpectralReport rad_v0;     // Gelfand radius of P on Linf_V0
};

PerV build_per_v(const ChainSpec& chain, const StationaryDist& pi,
                 const WeightFunction& V, const Seq& op_v, const Seq& op_v0,
                 long n_max, kernels::Exec exec) {
  PerV pv;
  const auto window = fit_window(n_max);
  pv.fit_v = fit_geometric_rate(op_v, window);
  pv.fit_v0 = fit_geometric_rate(op_v0, window);
  std::tie(pv.m_v, pv.m_v_value) = first_contraction(op_v);
  std::tie(pv.m_v0, pv.m_v0_value) = first_contraction(op_v0);
  GelfandOptions opts;
  opts.exec = exec;
  pv.rad_dev = gelfand_radius(deviation_kernel(chain, pi),
                              OperatorNorm::linf_v(V), opts);
  pv.rad_v0 = gelfand_radius(chain.P, OperatorNorm::linf_v0(V, pi), opts);
  return pv;
}

// Assembles the fourteen verdicts xiii..xxvi from per-V data, using
// "some V" semantics over the supplied battery.  Twin conditions (some j /
// all j) share outcomes: on a finite space every stationary moment is finite,
// so the moment quantifier never separates them.
std::vector<Verdict> spectral_verdicts(const std::vector<PerV>& per_v,
                                       long multiplicity,
                                       const std::map<long, double>& moments) {
  const std::size_t nv = per_v.size();
  auto choose = [&](auto pred) -> std::size_t {
    // Prefer V = 1 (index 0) when it certifies, else the first V that does,
    // else fall back to index 0 as refutation evidence.
    for (std::size_t vi = 0; vi < nv; ++vi)
      if (pred(per_v[vi])) return vi;
    return 0;
  };
  auto moment_diag = [&](Verdict& v) {
    for (const auto& [j, value] : moments)
      v.diagnostics["pi_V_moment_j" + std::to_string(j)] = value;
  };

  std::vector<Verdict> out;

  // xiii/xiv: spectral gap on the weighted sup space — simple eigenvalue 1
  // plus the rest of the spectrum inside a disk of radius < 1.
  {
    auto ok = [&](const PerV& pv) {
      return multiplicity == 1 && pv.rad_v0.radius < 1.0 - kRateHoldsTol;
    };
    const std::size_t vi = choose(ok);
    for (ConditionId id : {ConditionId::xiii, ConditionId::xiv}) {
      Verdict v = make_verdict(id, ok(per_v[vi]));
      SpectralReport rep = per_v[vi].rad_v0;
      rep.eigenvalue_one_multiplicity = multiplicity;
      v.certificate = rep;
      v.diagnostics["multiplicity"] = static_cast<double>(multiplicity);
      v.diagnostics["radius_v1"] = per_v[0].rad_v0.radius;
      v.diagnostics["chosen_v"] = static_cast<double>(vi);
      if (id == ConditionId::xiv) moment_diag(v);
      out.push_back(std::move(v));
    }
  }

  // xv/xvi: Gelfand radius of P - Pi on Linf_V below 1.
  {
    auto ok = [&](const PerV& pv) {
      return pv.rad_dev.radius < 1.0 - kRateHoldsTol;
    };
    const std::size_t vi = choose(ok);
    for (ConditionId id : {ConditionId::xv, ConditionId::xvi}) {
      Verdict v = make_verdict(id, ok(per_v[vi]));
      v.certificate = per_v[vi].rad_dev;
      v.diagnostics["radius_v1"] = per_v[0].rad_dev.radius;
      v.diagnostics["chosen_v"] = static_cast<double>(vi);
      if (id == ConditionId::xvi) moment_diag(v);
      out.push_back(std::move(v));
    }
  }

  // xvii/xviii: Gelfand radius of P on the zero-mean subspace below 1.
  {
    auto ok = [&](const PerV& pv) {
      return pv.rad_v0.radius < 1.0 - kRateHoldsTol;
    };
    const std::size_t vi = choose(ok);
    for (ConditionId id : {ConditionId::xvii, ConditionId::xviii}) {
      Verdict v = make_verdict(id, ok(per_v[vi]));
      v.certificate = per_v[vi].rad_v0;
      v.diagnostics["radius_v1"] = per_v[0].rad_v0.radius;
      v.diagnostics["chosen_v"] = static_cast<double>(vi);
      if (id == ConditionId::xviii) moment_diag(v);
      out.push_back(std::move(v));
    }
  }

  // xix/xx: some power of P - Pi has Linf_V norm < 1.
  {
    auto ok = [&](const PerV& pv) { return pv.m_v > 0; };
    const std::size_t vi = choose(ok);
    for (ConditionId id : {ConditionId::xix, ConditionId::xx}) {
      Verdict v = make_verdict(id, ok(per_v[vi]));
      v.certificate = NormBound{per_v[vi].m_v, per_v[vi].m_v_value};
      v.diagnostics["m_v1"] = static_cast<double>(per_v[0].m_v);
      v.diagnostics["chosen_v"] = static_cast<double>(vi);
      if (id == ConditionId::xx) moment_diag(v);
      out.push_back(std::move(v));
    }
  }

  // xxi/xxii: some power of P contracts the zero-mean subspace.
  {
    auto ok = [&](const PerV& pv) { return pv.m_v0 > 0; };
    const std::size_t vi = choose(ok);
    for (ConditionId id : {ConditionId::xxi, ConditionId::xxii}) {
      Verdict v = make_verdict(id, ok(per_v[vi]));
      v.certificate = NormBound{per_v[vi].m_v0, per_v[vi].m_v0_value};
      v.diagnostics["m_v1"] = static_cast<double>(per_v[0].m_v0);
      v.diagnostics["chosen_v"] = static_cast<double>(vi);
      if (id == ConditionId::xxii) moment_diag(v);
      out.push_back(std::move(v));
    }
  }

  // xxiii/xxiv: the Linf_V norm sequence of P^n - Pi decays geometrically.
  {
    auto ok = [&](const PerV& pv) { return pv.fit_v.geometric; };
    const std::size_t vi = choose(ok);
    for (ConditionId id : {ConditionId::xxiii, ConditionId::xxiv}) {
      Verdict v = make_verdict(id, ok(per_v[vi]));
      v.certificate = GeometricRate{per_v[vi].fit_v.rho, per_v[vi].fit_v.C, {}};
      v.diagnostics["rho_v1"] = per_v[0].fit_v.rho;
      v.diagnostics["C_v1"] = per_v[0].fit_v.C;
      v.diagnostics["chosen_v"] = static_cast<double>(vi);
      if (id == ConditionId::xxiv) moment_diag(v);
      out.push_back(std::move(v));
    }
  }

  // xxv/xxvi: the zero-mean norm sequence of P^n decays geometrically.
  {
    auto ok = [&](const PerV& pv) { return pv.fit_v0.geometric; };
    const std::size_t vi = choose(ok);
    for (ConditionId id : {ConditionId::xxv, ConditionId::xxvi}) {
      Verdict v = make_verdict(id, ok(per_v[vi]));
      v.certificate =
          GeometricRate{per_v[vi].fit_v0.rho, per_v[vi].fit_v0.C, {}};
      v.diagnostics["rho_v1"] = per_v[0].fit_v0.rho;
      v.diagnostics["C_v1"] = per_v[0].fit_v0.C;
      v.diagnostics["chosen_v"] = static_cast<double>(vi);
      if (id == ConditionId::xxvi) moment_diag(v);
      out.push_back(std::move(v));
    }
  }
  return out;
}

// The seven L^2(pi) verdicts for a reversible chain.  point_l2[x] and
// mu_l2[mi] are the decay sequences; mu0[..] the initial L^2 norms.
std::vector<Verdict> reversible_verdicts(
    const ChainSpec& chain, const StationaryDist& pi,
    const std::vector<Seq>& point_l2, const std::vector<double>& point_l2_0,
    const std::vector<Seq>& mu_l2, const std::vector<double>& mu_l2_0,
    long multiplicity, kernels::Exec exec) {
  const double rho2 = pi_perp_norm(chain, pi);
  const ReversibleSpectrum spectrum = reversible_spectrum(chain, pi);
  const Matrix D = deviation_kernel(chain, pi);
  const double l2norm = l2_measure_norm_of_operator(D, pi);
  GelfandOptions opts;
  opts.exec = exec;
  const SpectralReport rad_dev = gelfand_radius(D, OperatorNorm::l2pi(pi), opts);

  // Battery inequality ||mu P^n - pi|| <= ||mu - pi|| rho2^n (exact for a
  // self-adjoint contraction; verified with additive re-check slack).
  long violations = 0;
  const double log_rho =
      rho2 > 0.0 ? std::log(rho2) : -std::numeric_limits<double>::infinity();
  auto check = [&](const Seq& seq, double initial) {
    for (const auto& [n, value] : seq) {
      const double bound =
          rho2 > 0.0 ? initial * std::exp(static_cast<double>(n) * log_rho)
                     : 0.0;
      if (value > bound + kReverifyTol) ++violations;
    }
  };
  for (std::size_t x = 0; x < point_l2.size(); ++x)
    check(point_l2[x], point_l2_0[x]);
  for (std::size_t mi = 0; mi < mu_l2.size(); ++mi)
    check(mu_l2[mi], mu_l2_0[mi]);

  double max_initial = 0.0;
  for (double v : point_l2_0) max_initial = std::max(max_initial, v);
  for (double v : mu_l2_0) max_initial = std::max(max_initial, v);

  std::vector<Verdict> out;

  // xxvii/xxviii: geometric L^2 decay from every starting measure; the
  // self-adjoint contraction factor makes C exactly the initial distance.
  const bool l2_decay = rho2 < 1.0 - kRateHoldsTol && violations == 0;
  for (ConditionId id : {ConditionId::xxvii, ConditionId::xxviii}) {
    Verdict v = make_verdict(id, l2_decay);
    v.certificate = GeometricRate{rho2, max_initial, {}};
    v.diagnostics["pi_perp"] = rho2;
    v.diagnostics["battery_violations"] = static_cast<double>(violations);
    out.push_back(std::move(v));
  }

  // xxix: L^2 spectral gap with a simple top eigenvalue.
  {
    const double second_mod = 1.0 - spectrum.gap;
    Verdict v = make_verdict(ConditionId::xxix,
                             multiplicity == 1 && spectrum.gap > kRateHoldsTol);
    SpectralReport rep;
    rep.radius = second_mod;
    rep.norm_space = NormSpace::PiPerp;
    rep.converged = true;
    rep.eigenvalue_one_multiplicity = multiplicity;
    v.certificate = rep;
    v.diagnostics["gap"] = spectrum.gap;
    v.diagnostics["second_mod"] = second_mod;
    v.diagnostics["top_multiplicity"] =
        static_cast<double>(spectrum.top_multiplicity);
    out.push_back(std::move(v));
  }

  // xxx: Gelfand radius of P - Pi on L^2(pi).
  {
    Verdict v = make_verdict(ConditionId::xxx,
                             rad_dev.radius < 1.0 - kRateHoldsTol);
    v.certificate = rad_dev;
    v.diagnostics["radius"] = rad_dev.radius;
    out.push_back(std::move(v));
  }

  // xxxi: one-step L^2 norm of P - Pi below 1.
  {
    Verdict v = make_verdict(ConditionId::xxxi, l2norm < 1.0 - kRateHoldsTol);
    v.certificate = NormBound{1, l2norm};
    v.diagnostics["l2_norm"] = l2norm;
    out.push_back(std::move(v));
  }

  // xxxii: P contracts the zero-total-mass subspace in one step.
  {
    Verdict v = make_verdict(ConditionId::xxxii, rho2 < 1.0 - kRateHoldsTol);
    v.certificate = NormBound{1, rho2};
    v.diagnostics["pi_perp"] = rho2;
    out.push_back(std::move(v));
  }

  // xxxiii: spectral radius of P on the zero-total-mass subspace below 1
  // (equal to the norm by self-adjointness).
  {
    Verdict v = make_verdict(ConditionId::xxxiii, rho2 < 1.0 - kRateHoldsTol);
    SpectralReport rep;
    rep.radius = rho2;
    rep.norm_space = NormSpace::PiPerp;
    rep.converged = true;
    rep.eigenvalue_one_multiplicity = multiplicity;
    v.certificate = rep;
    v.diagnostics["pi_perp"] = rho2;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Verdict> not_applicable_block(double residual) {
  std::vector<Verdict> out;
  for (int k = 27; k <= 33; ++k) {
    Verdict v;
    v.id = static_cast<ConditionId>(k);
    v.outcome = Outcome::NotApplicable;
    v.diagnostics["reversibility_residual"] = residual;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

bool requires_reversible(ConditionId id) noexcept {
  return static_cast<int>(id) >= 27;
}

const char* roman(ConditionId id) noexcept {
  const int k = static_cast<int>(id);
  if (k < 1 || k > kNumConditions) return "?";
  return kRomanNames[k - 1];
}

std::optional<ConditionId> condition_from_roman(std::string_view name) {
  for (int k = 0; k < kNumConditions; ++k)
    if (name == kRomanNames[k]) return static_cast<ConditionId>(k + 1);
  return std::nullopt;
}

const char* outcome_name(Outcome o) noexcept {
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::NotApplicable: return "not_applicable";
  }
  return "?";
}

FitResult fit_geometric_rate(const std::vector<std::pair<long, double>>& decay,
                             std::pair<long, long> window) {
  bool any_in_window = false;
  double sn = 0.0, slog = 0.0, snn = 0.0, snlog = 0.0;
  long m = 0;
  for (const auto& [n, value] : decay) {
    if (n < window.first || n > window.second) continue;
    any_in_window = true;
    if (value > 0.0) {
      const double dn = static_cast<double>(n);
      const double lv = std::log(value);
      sn += dn;
      slog += lv;
      snn += dn * dn;
      snlog += dn * lv;
      ++m;
    }
  }
  if (!any_in_window)
    fail(Err::EmptyWindow, "no decay samples inside the fit window");

  FitResult fit;
  fit.points_used = m;
  if (m >= 2) {
    const double denom = static_cast<double>(m) * snn - sn * sn;
    if (denom > 0.0) {
      const double slope = (static_cast<double>(m) * snlog - sn * slog) / denom;
      fit.rho = std::exp(slope);
    } else {
      fit.rho = 1.0;  // degenerate abscissae: cannot certify decay
    }
  } else {
    fit.rho = 0.0;  // at most one nonzero sample: treat as immediate decay
  }

  if (fit.rho <= 0.0) {
    double top = 0.0;
    for (const auto& [n, value] : decay) top = std::max(top, value);
    fit.C = top;
  } else {
    const double log_rho = std::log(fit.rho);
    double top_log = -std::numeric_limits<double>::infinity();
    for (const auto& [n, value] : decay) {
      if (value <= 0.0) continue;
      top_log = std::max(top_log,
                         std::log(value) - static_cast<double>(n) * log_rho);
    }
    fit.C = std::isfinite(top_log) ? std::exp(top_log) : 0.0;
  }
  fit.geometric = fit.rho < 1.0 - kRateHoldsTol;
  return fit;
}

std::vector<Verdict> cond_pointwise_tv(const ChainSpec& chain,
                                       const StationaryDist& pi, long n_max,
                                       kernels::Exec exec) {
  require_irreducible_structure(chain);
  const DecayData d = run_decay(chain, pi, {}, {}, n_max, false, exec);
  const auto window = fit_window(n_max);
  const std::size_t N = chain.size();

  double max_rho = 0.0;
  std::vector<FitResult> fits(N);
  for (std::size_t x = 0; x < N; ++x) {
    fits[x] = fit_geometric_rate(d.tv_rows[x], window);
    max_rho = std::max(max_rho, fits[x].rho);
  }

  // One shared rate; per-state constants recomputed against it so the
  // certificate re-verifies pointwise.
  GeometricRate cert;
  cert.rho = max_rho;
  cert.C_x.assign(N, 0.0);
  const double log_rho = max_rho > 0.0 ? std::log(max_rho) : 0.0;
  for (std::size_t x = 0; x < N; ++x) {
    double top = 0.0;
    for (const auto& [n, value] : d.tv_rows[x]) {
      if (max_rho > 0.0) {
        if (value > 0.0)
          top = std::max(top,
                         std::exp(std::log(value) -
                                  static_cast<double>(n) * log_rho));
      } else {
        top = std::max(top, value);
      }
    }
    cert.C_x[x] = top;
    cert.C = std::max(cert.C, top);
  }

  const bool holds = max_rho < 1.0 - kRateHoldsTol;
  std::vector<Verdict> out;
  for (ConditionId id : {ConditionId::i, ConditionId::ii}) {
    Verdict v = make_verdict(id, holds);
    v.certificate = cert;
    v.diagnostics["max_rho"] = max_rho;
    if (id == ConditionId::ii)
      v.diagnostics["num_states"] = static_cast<double>(N);
    out.push_back(std::move(v));
  }
  return out;
}

Verdict cond_measure_tv(const ChainSpec& chain, const StationaryDist& pi,
                        const SignedMeasureVec& mu, double p, long n_max,
                        kernels::Exec exec) {
  require_irreducible_structure(chain);
  const double lp = lp_norm(mu, pi, p);
  if (!std::isfinite(lp))
    fail(Err::MeasureNotInLp,
         "measure has infinite L^" + fmt_double_key(p) + "(pi) norm");
  const DecayData d = run_decay(chain, pi, {}, {mu}, n_max, false, exec);
  const FitResult fit = fit_geometric_rate(d.mu_tv[0], fit_window(n_max));

  Verdict v = make_verdict(ConditionId::iii, fit.geometric);
  v.certificate = GeometricRate{fit.rho, fit.C, {}};
  v.diagnostics["p"] = p;
  v.diagnostics["lp_norm"] = lp;
  return v;
}

Verdict cond_v_uniform(const ChainSpec& chain, const StationaryDist& pi,
                       const WeightFunction& V, long n_max,
                       kernels::Exec exec) {
  require_irreducible_structure(chain);
  const DecayData d = run_decay(chain, pi, {V}, {}, n_max, false, exec);
  const FitResult fit = fit_geometric_rate(d.op_v[0], fit_window(n_max));

  Verdict v = make_verdict(ConditionId::ix, fit.geometric);
  v.certificate = GeometricRate{fit.rho, fit.C, {}};
  v.diagnostics["rho_v1"] = fit.rho;
  v.diagnostics["C_v1"] = fit.C;
  return v;
}

std::vector<Verdict> cond_spectral(const ChainSpec& chain,
                                   const StationaryDist& pi,
                                   const WeightFunction& V,
                                   const std::vector<long>& j_set, long n_max,
                                   kernels::Exec exec) {
  require_irreducible_structure(chain);
  const DecayData d = run_decay(chain, pi, {V}, {}, n_max, false, exec);
  const long multiplicity = eigenvalue_one_multiplicity(chain);
  std::vector<PerV> per_v;
  per_v.push_back(
      build_per_v(chain, pi, V, d.op_v[0], d.op_v0[0], n_max, exec));

  std::map<long, double> moments;
  for (long j : j_set) {
    if (j < 1) fail(Err::BadParameters, "moment order must be >= 1");
    double s = 0.0;
    for (std::size_t x = 0; x < chain.size(); ++x)
      s += pi.pi[x] * std::pow(V[x], static_cast<double>(j));
    moments[j] = s;
  }
  return spectral_verdicts(per_v, multiplicity, moments);
}

std::vector<Verdict> cond_reversible(const ChainSpec& chain,
                                     const StationaryDist& pi, long n_max,
                                     std::uint64_t seed, kernels::Exec exec) {
  const StructureReport srep = require_irreducible_structure(chain);
  if (!srep.reversible)
    return not_applicable_block(srep.reversibility_residual);

  const StateSet S = default_small_set(pi);
  const auto mus = measure_battery(chain.size(), S, pi, seed);
  const DecayData d = run_decay(chain, pi, {}, mus, n_max, true, exec);

  std::vector<double> point0(chain.size(), 0.0);
  for (std::size_t x = 0; x < chain.size(); ++x) {
    SignedMeasureVec diff{Vec(chain.size(), 0.0)};
    for (std::size_t y = 0; y < chain.size(); ++y)
      diff.mu[y] = (y == x ? 1.0 : 0.0) - pi.pi[y];
    point0[x] = l2_measure_norm(diff, pi);
  }
  std::vector<double> mu0(mus.size(), 0.0);
  for (std::size_t mi = 0; mi < mus.size(); ++mi) {
    SignedMeasureVec diff{Vec(chain.size(), 0.0)};
    for (std::size_t y = 0; y < chain.size(); ++y)
      diff.mu[y] = mus[mi].mu[y] - pi.pi[y];
    mu0[mi] = l2_measure_norm(diff, pi);
  }
  return reversible_verdicts(chain, pi, d.row_l2, point0, d.mu_l2, mu0,
                             eigenvalue_one_multiplicity(chain), exec);
}

std::vector<Verdict> evaluate_conditions(const ChainSpec& chain,
                                         const StationaryDist& pi,
                                         const ConditionConfig& config) {
  if (config.n_max < 2) fail(Err::BadParameters, "n_max must be >= 2");
  if (config.j_set.empty()) fail(Err::BadParameters, "j_set must be nonempty");
  for (long j : config.j_set)
    if (j < 1) fail(Err::BadParameters, "moment orders must be >= 1");
  for (double p : config.p_set)
    if (!(p > 1.0)) fail(Err::BadParameters, "p values must exceed 1");

  const StructureReport srep = require_irreducible_structure(chain);
  const std::size_t N = chain.size();
  const long n_max = config.n_max;
  const auto window = fit_window(n_max);
  const kernels::Exec exec = config.exec;

  // --- battery ------------------------------------------------------------
  // The drift battery needs kappa_star strictly above 1; when the taboo
  // radius is numerically at 1 the return-time conditions fail anyway, so the
  // weight battery degrades to V = 1 instead of aborting the whole analysis.
  const StateSet S = default_small_set(pi);
  const double ks = kappa_star(chain, S);
  std::optional<ReturnTimeCert> rt;
  std::optional<DriftCert> drift;
  double kappa = std::numeric_limits<double>::quiet_NaN();
  if (ks > 1.0 + kReverifyTol) {
    kappa = default_kappa(ks);
    rt = return_time_mgf(chain, S, kappa);
    drift = synthesize_drift(chain, S, kappa, config.j_set);
  }

  std::vector<WeightFunction> Vs;
  Vs.push_back(WeightFunction::ones(N));
  std::vector<DriftCert> powered;
  if (drift) {
    Vs.push_back(drift->V);
    for (long j : config.j_set)
      if (j >= 2) {
        powered.push_back(drift_power(chain, *drift, j));
        Vs.push_back(powered.back().V);
      }
  }
  const std::map<long, double> drift_moments =
      drift ? drift->pi_V_moments : std::map<long, double>{};

  const auto mus = measure_battery(N, S, pi, config.seed);
  const bool want_l2 = srep.reversible;
  const DecayData d = run_decay(chain, pi, Vs, mus, n_max, want_l2, exec);
  const long multiplicity = eigenvalue_one_multiplicity(chain);

  std::vector<Verdict> verdicts;
  verdicts.reserve(kNumConditions);

  // --- i / ii ---------------------------------------------------------------
  {
    std::vector<Verdict> tv;
    double max_rho = 0.0;
    std::vector<FitResult> fits(N);
    for (std::size_t x = 0; x < N; ++x) {
      fits[x] = fit_geometric_rate(d.tv_rows[x], window);
      max_rho = std::max(max_rho, fits[x].rho);
    }
    GeometricRate cert;
    cert.rho = max_rho;
    cert.C_x.assign(N, 0.0);
    const double log_rho = max_rho > 0.0 ? std::log(max_rho) : 0.0;
    for (std::size_t x = 0; x < N; ++x) {
      double top = 0.0;
      for (const auto& [n, value] : d.tv_rows[x]) {
        if (max_rho > 0.0) {
          if (value > 0.0)
            top = std::max(top, std::exp(std::log(value) -
                                         static_cast<double>(n) * log_rho));
        } else {
          top = std::max(top, value);
        }
      }
      cert.C_x[x] = top;
      cert.C = std::max(cert.C, top);
    }
    const bool holds = max_rho < 1.0 - kRateHoldsTol;
    for (ConditionId id : {ConditionId::i, ConditionId::ii}) {
      Verdict v = make_verdict(id, holds);
      v.certificate = cert;
      v.diagnostics["max_rho"] = max_rho;
      if (id == ConditionId::ii)
        v.diagnostics["num_states"] = static_cast<double>(N);
      verdicts.push_back(std::move(v));
    }
  }

  // --- iii / iv -------------------------------------------------------------
  // TV decay from the full measure battery: point masses (rows of the walk),
  // the small-set restriction of pi, and the random measures.  On a finite
  // space every battery measure lies in every L^p(pi), so the "some p" and
  // "all p" variants coincide; the L^p norms are recorded as diagnostics.
  {
    double rho = 0.0, C = 0.0;
    bool all_geometric = true;
    auto absorb = [&](const Seq& seq) {
      const FitResult fit = fit_geometric_rate(seq, window);
      all_geometric = all_geometric && fit.geometric;
      rho = std::max(rho, fit.rho);
      C = std::max(C, fit.C);
    };
    for (std::size_t x = 0; x < N; ++x) absorb(d.tv_rows[x]);
    for (std::size_t mi = 0; mi < mus.size(); ++mi) absorb(d.mu_tv[mi]);

    for (ConditionId id : {ConditionId::iii, ConditionId::iv}) {
      Verdict v = make_verdict(id, all_geometric);
      v.certificate = GeometricRate{rho, C, {}};
      for (double p : config.p_set) {
        double top = 0.0;
        for (const auto& mu : mus) top = std::max(top, lp_norm(mu, pi, p));
        v.diagnostics["max_lp_norm_p" + fmt_double_key(p)] = top;
      }
      v.diagnostics["num_measures"] =
          static_cast<double>(mus.size() + N);
      verdicts.push_back(std::move(v));
    }
  }

  // --- v ----------------------------------------------------------------
  {
    const FitResult fit = fit_geometric_rate(d.mu_tv[0], window);
    Verdict v = make_verdict(ConditionId::v, fit.geometric);
    v.certificate = GeometricRate{fit.rho, fit.C, {}};
    v.diagnostics["small_set_size"] = static_cast<double>(S.size());
    double mass = 0.0;
    for (std::size_t s : S) mass += pi.pi[s];
    v.diagnostics["pi_S_mass"] = mass;
    verdicts.push_back(std::move(v));
  }

  // --- vi ---------------------------------------------------------------
  {
    Verdict v = make_verdict(
        ConditionId::vi, rt && rt->kappa_star > 1.0 + kReverifyTol);
    if (rt) {
      v.certificate = *rt;
      v.diagnostics["kappa_star"] = rt->kappa_star;
      v.diagnostics["kappa"] = rt->kappa;
      v.diagnostics["taboo_radius"] = rt->taboo_radius;
      double sup_mgf = 0.0;
      for (std::size_t s : S) sup_mgf = std::max(sup_mgf, rt->mgf[s]);
      v.diagnostics["sup_mgf_on_S"] = sup_mgf;
    } else {
      v.diagnostics["kappa_star"] = ks;
    }
    verdicts.push_back(std::move(v));
  }

  // --- vii / viii ---------------------------------------------------------
  // Re-verify the synthesized drift function from scratch; the certificate
  // carries the freshly measured lambda and b.
  {
    DriftResult res;
    if (drift) res = verify_drift(chain, drift->V, drift->S, config.j_set);
    for (ConditionId id : {ConditionId::vii, ConditionId::viii}) {
      Verdict v = make_verdict(id, res.accepted);
      if (res.accepted) v.certificate = res.cert;
      v.diagnostics["lambda"] = res.lambda;
      if (res.accepted) v.diagnostics["b"] = res.cert.b;
      if (!std::isnan(kappa)) v.diagnostics["kappa"] = kappa;
      verdicts.push_back(std::move(v));
    }
  }

  // --- ix..xii ------------------------------------------------------------
  {
    std::vector<FitResult> vfits(Vs.size());
    for (std::size_t vi = 0; vi < Vs.size(); ++vi)
      vfits[vi] = fit_geometric_rate(d.op_v[vi], window);

    auto choose = [&](auto pred) {
      for (std::size_t vi = 0; vi < Vs.size(); ++vi)
        if (pred(vi)) return vi;
      return static_cast<std::size_t>(0);
    };

    // ix/x: sup over states of the V-weighted row decay.
    {
      auto ok = [&](std::size_t vi) { return vfits[vi].geometric; };
      const std::size_t vi = choose(ok);
      for (ConditionId id : {ConditionId::ix, ConditionId::x}) {
        Verdict v = make_verdict(id, ok(vi));
        v.certificate = GeometricRate{vfits[vi].rho, vfits[vi].C, {}};
        v.diagnostics["rho_v1"] = vfits[0].rho;
        v.diagnostics["C_v1"] = vfits[0].C;
        v.diagnostics["chosen_v"] = static_cast<double>(vi);
        if (id == ConditionId::x)
          for (const auto& [j, value] : drift_moments)
            v.diagnostics["pi_V_moment_j" + std::to_string(j)] = value;
        verdicts.push_back(std::move(v));
      }
    }

    // xi/xii: decay from every measure with mu(V) finite, with constant
    // C mu(V).  The point-mass part is exactly the ix sequence; the battery
    // measures are checked with their mu(V) normalisers.
    {
      std::vector<char> mu_ok(Vs.size(), 1);
      std::vector<double> mu_rho(Vs.size(), 0.0), mu_C(Vs.size(), 0.0);
      for (std::size_t vi = 0; vi < Vs.size(); ++vi) {
        for (std::size_t mi = 0; mi < mus.size(); ++mi) {
          const FitResult fit = fit_geometric_rate(d.mu_v[vi][mi], window);
          mu_ok[vi] = mu_ok[vi] && fit.geometric;
          mu_rho[vi] = std::max(mu_rho[vi], fit.rho);
          mu_C[vi] = std::max(mu_C[vi], fit.C);
        }
      }
      auto ok = [&](std::size_t vi) {
        return vfits[vi].geometric && mu_ok[vi];
      };
      const std::size_t vi = choose(ok);
      for (ConditionId id : {ConditionId::xi, ConditionId::xii}) {
        Verdict v = make_verdict(id, ok(vi));
        v.certificate = GeometricRate{std::max(vfits[vi].rho, mu_rho[vi]),
                                      std::max(vfits[vi].C, mu_C[vi]),
                                      {}};
        v.diagnostics["chosen_v"] = static_cast<double>(vi);
        for (std::size_t mi = 0; mi < mus.size(); ++mi) {
          double s = 0.0;
          for (std::size_t x = 0; x < N; ++x) s += mus[mi].mu[x] * Vs[vi][x];
          v.diagnostics["mu_V_" + std::to_string(mi)] = s;
        }
        if (id == ConditionId::xii)
          for (const auto& [j, value] : drift_moments)
            v.diagnostics["pi_V_moment_j" + std::to_string(j)] = value;
        verdicts.push_back(std::move(v));
      }
    }
  }

  // --- xiii..xxvi -----------------------------------------------------------
  {
    std::vector<PerV> per_v;
    per_v.reserve(Vs.size());
    for (std::size_t vi = 0; vi < Vs.size(); ++vi)
      per_v.push_back(build_per_v(chain, pi, Vs[vi], d.op_v[vi], d.op_v0[vi],
                                  n_max, exec));
    for (Verdict& v : spectral_verdicts(per_v, multiplicity, drift_moments))
      verdicts.push_back(std::move(v));
  }

  // --- xxvii..xxxiii --------------------------------------------------------
  if (!srep.reversible) {
    for (Verdict& v : not_applicable_block(srep.reversibility_residual))
      verdicts.push_back(std::move(v));
  } else {
    std::vector<double> point0(N, 0.0);
    for (std::size_t x = 0; x < N; ++x) {
      SignedMeasureVec diff{Vec(N, 0.0)};
      for (std::size_t y = 0; y < N; ++y)
        diff.mu[y] = (y == x ? 1.0 : 0.0) - pi.pi[y];
      point0[x] = l2_measure_norm(diff, pi);
    }
    std::vector<double> mu0(mus.size(), 0.0);
    for (std::size_t mi = 0; mi < mus.size(); ++mi) {
      SignedMeasureVec diff{Vec(N, 0.0)};
      for (std::size_t y = 0; y < N; ++y)
        diff.mu[y] = mus[mi].mu[y] - pi.pi[y];
      mu0[mi] = l2_measure_norm(diff, pi);
    }
    for (Verdict& v :
         reversible_verdicts(chain, pi, d.row_l2, point0, d.mu_l2, mu0,
                             multiplicity, exec))
      verdicts.push_back(std::move(v));
  }

  std::sort(verdicts.begin(), verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
  return verdicts;
}

const std::vector<std::pair<ConditionId, ConditionId>>& implication_edges() {
  using C = ConditionId;
  static const std::vector<std::pair<ConditionId, ConditionId>> edges = {
      // TV / small-set / return-time / drift cycle.
      {C::iv, C::iii},   {C::iii, C::v},    {C::v, C::i},     {C::i, C::ii},
      {C::ii, C::v},     {C::v, C::vi},     {C::vi, C::vii},  {C::vii, C::viii},
      {C::viii, C::x},   {C::x, C::xxiv},   {C::x, C::xii},   {C::ix, C::xi},
      {C::xii, C::iv},   {C::xi, C::i},
      // Norm-decay block.
      {C::xxiv, C::xxiii}, {C::xxiv, C::xxii}, {C::xxiii, C::xxi},
      {C::xxiii, C::ix},   {C::xxi, C::xix},   {C::xxii, C::xx},
      {C::xix, C::xxiii},  {C::xx, C::xxiv},
      // Gelfand-formula equivalences (both directions).
      {C::xv, C::xix},    {C::xix, C::xv},   {C::xvi, C::xx},  {C::xx, C::xvi},
      {C::xvii, C::xxi},  {C::xxi, C::xvii}, {C::xviii, C::xxii},
      {C::xxii, C::xviii},
      {C::xiii, C::xvii}, {C::xvii, C::xiii}, {C::xiv, C::xviii},
      {C::xviii, C::xiv},
      {C::xxiii, C::xxv}, {C::xxv, C::xxiii}, {C::xxiv, C::xxvi},
      {C::xxvi, C::xxiv},
      // Reversible L^2 block.
      {C::iv, C::xxxii},   {C::xxxii, C::xxxi}, {C::xxxi, C::xxviii},
      {C::xxviii, C::xxvii}, {C::xxvii, C::iii},
      {C::xxxii, C::xxxiii}, {C::xxxiii, C::xxxii},
      {C::xxxi, C::xxx},     {C::xxx, C::xxxi},
      {C::xxix, C::xxxiii},  {C::xxxiii, C::xxix},
  };
  return edges;
}

std::vector<EdgeCheck> ConsistencyReport::violated_edges() const {
  std::vector<EdgeCheck> out;
  for (const EdgeCheck& e : edges)
    if (e.status == EdgeCheck::Status::Violated) out.push_back(e);
  return out;
}

const Verdict& ConsistencyReport::verdict(ConditionId id) const {
  for (const Verdict& v : verdicts)
    if (v.id == id) return v;
  fail(Err::BadParameters,
       std::string("no verdict recorded for condition ") + roman(id));
}

ConsistencyReport cross_validate(const ChainSpec& chain,
                                 const StationaryDist& pi,
                                 const ConditionConfig& config) {
  ConsistencyReport rep;
  rep.structure = structure(chain);
  rep.verdicts = evaluate_conditions(chain, pi, config);

  auto touches_drift_block = [](ConditionId a, ConditionId b) {
    auto in_block = [](ConditionId c) {
      return c == ConditionId::vi || c == ConditionId::vii ||
             c == ConditionId::viii;
    };
    return in_block(a) || in_block(b);
  };

  for (const auto& [from, to] : implication_edges()) {
    EdgeCheck e;
    e.from = from;
    e.to = to;
    const Verdict& va = rep.verdict(from);
    const Verdict& vb = rep.verdict(to);
    if (va.outcome == Outcome::NotApplicable ||
        vb.outcome == Outcome::NotApplicable) {
      e.status = EdgeCheck::Status::Skipped;
      e.reason = "L^2(pi) conditions are not applicable on a non-reversible "
                 "chain";
    } else if (!rep.structure.aperiodic && touches_drift_block(from, to)) {
      e.status = EdgeCheck::Status::Skipped;
      e.reason = "return-time and drift conditions hold on periodic chains "
                 "without implying the rest";
    } else if (va.holds() && vb.outcome == Outcome::Fails) {
      e.status = EdgeCheck::Status::Violated;
    } else {
      e.status = EdgeCheck::Status::Consistent;
    }
    rep.edges.push_back(std::move(e));
  }

  // Rate coherence against the reversible eigen-oracle (recorded, never an
  // edge violation: fits and radii are estimates of the same quantity).
  auto cert_rho = [&](ConditionId id) {
    const Verdict& v = rep.verdict(id);
    if (const auto* g = std::get_if<GeometricRate>(&v.certificate))
      return g->rho;
    return kNaN;
  };
  auto diag = [&](ConditionId id, const char* key) {
    const Verdict& v = rep.verdict(id);
    const auto it = v.diagnostics.find(key);
    return it == v.diagnostics.end() ? kNaN : it->second;
  };
  rep.rates.pointwise_tv = cert_rho(ConditionId::i);
  rep.rates.v_uniform = diag(ConditionId::ix, "rho_v1");
  rep.rates.norm_decay = diag(ConditionId::xxiii, "rho_v1");
  rep.rates.gelfand_linf_v = diag(ConditionId::xv, "radius_v1");
  if (rep.structure.reversible) {
    rep.rates.pi_perp = diag(ConditionId::xxxii, "pi_perp");
    rep.rates.eigen_oracle = diag(ConditionId::xxix, "second_mod");
    double delta = 0.0;
    for (double rate : {rep.rates.pointwise_tv, rep.rates.v_uniform,
                        rep.rates.norm_decay, rep.rates.gelfand_linf_v})
      delta = std::max(delta, std::abs(rate - rep.rates.eigen_oracle));
    rep.rates.max_delta = delta;
    rep.rates.coherent = delta <= config.rate_tol;
  } else {
    rep.rates.pi_perp = kNaN;
    rep.rates.eigen_oracle = kNaN;
    rep.rates.max_delta = kNaN;
    rep.rates.coherent = true;
  }
  return rep;
}

}  // namespace ergocert
