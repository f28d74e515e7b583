/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ergocert {

namespace {

constexpr double kReversibleResidualTol = 1e-10;

// Detailed-balance residual relative to the largest probability flow, and
// the symmetrised kernel A = D^{1/2} P D^{-1/2} (exactly symmetrised to
// scrub rounding asymmetry before the Jacobi solve).
Matrix symmetrized_kernel(const ChainSpec& chain, const StationaryDist& pi,
                          double* residual_out = nullptr) {
  const std::size_t n = chain.size();
  if (pi.pi.size() != n)
    fail(Err::DimensionMismatch, "stationary length vs chain size");
  double max_gap = 0.0;
  double max_flow = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double fwd = pi.pi[x] * chain.P(x, y);
      const double bwd = pi.pi[y] * chain.P(y, x);
      max_gap = std::max(max_gap, std::abs(fwd - bwd));
      max_flow = std::max(max_flow, std::max(fwd, bwd));
    }
  const double residual = max_flow > 0.0 ? max_gap / max_flow : 0.0;
  if (residual_out) *residual_out = residual;
  if (residual > kReversibleResidualTol)
    fail(Err::NotReversible,
         "detailed-balance residual " + std::to_string(residual));

  Matrix A(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (pi.pi[x] <= 0.0)
      fail(Err::ZeroStationaryMass,
           "state " + std::to_string(x) + " has zero stationary mass");
    for (std::size_t y = 0; y < n; ++y)
      A(x, y) = std::sqrt(pi.pi[x]) * chain.P(x, y) / std::sqrt(pi.pi[y]);
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      const double m = 0.5 * (A(x, y) + A(y, x));
      A(x, y) = m;
      A(y, x) = m;
    }
  return A;
}

}  // namespace

const char* norm_space_name(NormSpace s) noexcept {
  switch (s) {
    case NormSpace::LinfV: return "linf_v";
    case NormSpace::LinfV0: return "linf_v0";
    case NormSpace::L2pi: return "l2_pi";
    case NormSpace::PiPerp: return "pi_perp";
  }
  return "unknown";
}

OperatorNorm OperatorNorm::linf_v(WeightFunction V) {
  return OperatorNorm(NormSpace::LinfV, std::move(V), StationaryDist{});
}

OperatorNorm OperatorNorm::linf_v0(WeightFunction V, StationaryDist pi) {
  if (V.size() != pi.pi.size())
    fail(Err::DimensionMismatch, "weight length vs stationary length");
  return OperatorNorm(NormSpace::LinfV0, std::move(V), std::move(pi));
}

OperatorNorm OperatorNorm::l2pi(StationaryDist pi) {
  return OperatorNorm(NormSpace::L2pi, WeightFunction::ones(pi.pi.size()),
                      std::move(pi));
}

double OperatorNorm::operator()(const Matrix& K) const {
  switch (space_) {
    case NormSpace::LinfV:
      return op_norm_linf_v(K, v_);
    case NormSpace::LinfV0:
      return op_norm_linf_v0(K, v_, pi_);
    case NormSpace::L2pi:
      return l2_measure_norm_of_operator(K, pi_);
    case NormSpace::PiPerp:
      break;
  }
  fail(Err::NormEvaluation, "norm space not evaluable on raw matrices");
}

SpectralReport gelfand_radius(const Matrix& K, const OperatorNorm& norm,
                              const GelfandOptions& opt) {
  if (opt.n_max < 1) fail(Err::BadParameters, "n_max must be >= 1");
  if (!(opt.tol > 0.0)) fail(Err::BadParameters, "tol must be > 0");
  const std::size_t n = K.size();
  if (n == 0) fail(Err::BadParameters, "empty matrix");

  SpectralReport rep;
  rep.norm_space = norm.space();

  kernels::ScaledPower p;
  p.M = K;
  if (norm.space() == NormSpace::LinfV0) {
    // Restrict to the zero-pi-mean subspace before powering: seed with
    // K (I - 1 (x) pi).  For zero-row-sum K this changes nothing; for a
    // stochastic P it subtracts the stationary projector, so the decaying
    // part is powered directly instead of being recovered by cancellation.
    const Vec& pv = norm.pi().pi;
    if (pv.size() != n)
      fail(Err::DimensionMismatch, "stationary length vs matrix size");
    for (std::size_t x = 0; x < n; ++x) {
      double row_sum = 0.0;
      for (std::size_t y = 0; y < n; ++y) row_sum += K(x, y);
      for (std::size_t y = 0; y < n; ++y)
        p.M(x, y) = K(x, y) - row_sum * pv[y];
    }
  }
  p.log_scale = 0.0;
  p.n = 1;
  kernels::rescale(p);

  double prev = std::numeric_limits<double>::quiet_NaN();
  while (true) {
    const double raw_norm = norm(p.M);
    if (raw_norm == 0.0) {
      // Nilpotent at this power: the radius is exactly zero.
      rep.gelfand_iterates.emplace_back(p.n, 0.0);
      rep.radius = 0.0;
      rep.converged = true;
      return rep;
    }
    const double est =
        std::exp((std::log(raw_norm) + p.log_scale) / static_cast<double>(p.n));
    rep.gelfand_iterates.emplace_back(p.n, est);
    rep.radius = est;
    if (!std::isnan(prev) && std::abs(est - prev) < opt.tol) {
      rep.converged = true;
      return rep;
    }
    prev = est;
    if (2 * p.n > opt.n_max) {
      rep.converged = false;
      return rep;
    }
    p = kernels::scaled_square(p, opt.exec);
  }
}

long eigenvalue_one_multiplicity(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  Eigen::MatrixXd A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          chain.P(i, j) - (i == j ? 1.0 : 0.0);
  const double max_entry = A.cwiseAbs().maxCoeff();
  const double threshold = 1e-10 * static_cast<double>(n) * max_entry;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  // Count pivots above an absolute threshold ourselves; Eigen's rank() uses
  // a relative cutoff with different semantics.
  long rank = 0;
  const auto& R = qr.matrixQR();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(R(static_cast<Eigen::Index>(i),
                   static_cast<Eigen::Index>(i))) > threshold)
      ++rank;
  return static_cast<long>(n) - rank;
}

ReversibleSpectrum reversible_spectrum(const ChainSpec& chain,
                                       const StationaryDist& pi) {
  const Matrix A = symmetrized_kernel(chain, pi);
  Vec eig = kernels::jacobi_eigenvalues(A);
  std::sort(eig.begin(), eig.end());

  ReversibleSpectrum spec;
  spec.eigenvalues = std::move(eig);
  const std::size_t n = spec.eigenvalues.size();
  const double top = spec.eigenvalues.back();
  spec.top_multiplicity = 0;
  for (double l : spec.eigenvalues)
    if (l > top - 1e-9) ++spec.top_multiplicity;
  if (n == 1) {
    spec.gap = 1.0;
  } else {
    // Remove one copy of the top eigenvalue (the last after sorting); the
    // largest remaining modulus is either the most negative eigenvalue or
    // the second largest.
    const double second_mod = std::max(std::abs(spec.eigenvalues.front()),
                                       std::abs(spec.eigenvalues[n - 2]));
    spec.gap = 1.0 - second_mod;
  }
  return spec;
}

double pi_perp_norm(const ChainSpec& chain, const StationaryDist& pi) {
  const std::size_t n = chain.size();
  Matrix A = symmetrized_kernel(chain, pi);
  // sqrt(pi) is the known unit top eigenvector; deflating it leaves exactly
  // the action on the orthogonal complement.
  Vec s(n);
  for (std::size_t x = 0; x < n; ++x) s[x] = std::sqrt(pi.pi[x]);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) A(x, y) -= s[x] * s[y];
  const Vec eig = kernels::jacobi_eigenvalues(A);
  double m = 0.0;
  for (double l : eig) m = std::max(m, std::abs(l));
  return m;
}

}  // namespace ergocert
