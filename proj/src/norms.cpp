/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/norms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ergocert {

namespace {

void check_probability(const SignedMeasureVec& mu, const char* which) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.mu.size(); ++i) {
    if (mu.mu[i] < -1e-12)
      fail(Err::NotProbability, std::string(which) + " has negative mass at " +
                                    std::to_string(i));
    s += mu.mu[i];
  }
  if (std::abs(s - 1.0) > 1e-9)
    fail(Err::NotProbability,
         std::string(which) + " has total mass " + std::to_string(s));
}

}  // namespace

WeightFunction WeightFunction::ones(std::size_t n) {
  return WeightFunction(Vec(n, 1.0));
}

WeightFunction WeightFunction::from(Vec v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]) || v[i] < 1.0)
      fail(Err::VBelowOne,
           "V[" + std::to_string(i) + "] = " + std::to_string(v[i]));
  return WeightFunction(std::move(v));
}

double tv_distance(const SignedMeasureVec& mu1, const SignedMeasureVec& mu2) {
  if (mu1.mu.size() != mu2.mu.size())
    fail(Err::DimensionMismatch, "measures of different length");
  check_probability(mu1, "first measure");
  check_probability(mu2, "second measure");
  double s = 0.0;
  for (std::size_t i = 0; i < mu1.mu.size(); ++i)
    s += std::abs(mu1.mu[i] - mu2.mu[i]);
  return 0.5 * s;
}

double lp_norm(const SignedMeasureVec& mu, const StationaryDist& pi, double p) {
  if (mu.mu.size() != pi.pi.size())
    fail(Err::DimensionMismatch, "measure length vs stationary length");
  if (!(p >= 1.0)) fail(Err::BadParameters, "L^p norm needs p >= 1");
  // States where pi vanishes but mu does not: the density d(mu)/d(pi) does
  // not exist there.  For p = 1 the norm is still the total mass; for p > 1
  // it is +infinity (a value the caller may compare, not an error).
  double singular_mass = 0.0;
  double s = 0.0;
  for (std::size_t x = 0; x < mu.mu.size(); ++x) {
    if (pi.pi[x] <= 0.0) {
      singular_mass += std::abs(mu.mu[x]);
      continue;
    }
    const double density = mu.mu[x] / pi.pi[x];
    s += std::pow(std::abs(density), p) * pi.pi[x];
  }
  if (singular_mass > 0.0) {
    if (p == 1.0) return s + singular_mass;
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(s, 1.0 / p);
}

double v_norm_fn(const FunctionVec& f, const WeightFunction& V) {
  if (f.f.size() != V.size())
    fail(Err::DimensionMismatch, "function length vs weight length");
  double m = 0.0;
  for (std::size_t x = 0; x < f.f.size(); ++x)
    m = std::max(m, std::abs(f.f[x]) / V[x]);
  return m;
}

double v_norm_measure(const SignedMeasureVec& mu, const WeightFunction& V) {
  if (mu.mu.size() != V.size())
    fail(Err::DimensionMismatch, "measure length vs weight length");
  double s = 0.0;
  for (std::size_t x = 0; x < mu.mu.size(); ++x) s += std::abs(mu.mu[x]) * V[x];
  return s;
}

double op_norm_linf_v(const Matrix& K, const WeightFunction& V,
                      kernels::Exec exec) {
  return kernels::linf_v_norm(K, V.values(), exec);
}

double op_norm_linf_v0(const Matrix& K, const WeightFunction& V,
                       const StationaryDist& pi, kernels::Exec exec) {
  return kernels::linf_v0_norm(K, V.values(), pi.pi, exec);
}

double l2_measure_norm(const SignedMeasureVec& mu, const StationaryDist& pi) {
  return lp_norm(mu, pi, 2.0);
}

double l2_measure_norm_of_operator(const Matrix& K, const StationaryDist& pi) {
  // Acting on measures by mu -> mu K, the L^2(pi) operator norm is the
  // largest singular value of B = D^{1/2} K D^{-1/2} with D = diag(pi):
  // identifying a measure with its density against pi turns (mu -> mu K)
  // into f -> D^{-1} K^T D f, whose conjugation by D^{1/2} is B^T — and
  // B^T shares singular values with B.
  const std::size_t n = K.size();
  if (pi.pi.size() != n)
    fail(Err::DimensionMismatch, "stationary length vs matrix size");
  Eigen::MatrixXd B(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    if (pi.pi[x] <= 0.0)
      fail(Err::ZeroStationaryMass,
           "state " + std::to_string(x) + " has zero stationary mass");
    for (std::size_t y = 0; y < n; ++y)
      B(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
          std::sqrt(pi.pi[x]) * K(x, y) / std::sqrt(pi.pi[y]);
  }
  // sigma_max(B) = sqrt(lambda_max(B^T B)); the Gram matrix is symmetric
  // positive semidefinite, so a self-adjoint eigensolve is exact enough and
  // cheap at these sizes.
  const Eigen::MatrixXd G = B.transpose() * B;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.info() != Eigen::Success)
    fail(Err::NormEvaluation, "Gram eigensolve did not converge");
  const double top = es.eigenvalues().maxCoeff();
  return top <= 0.0 ? 0.0 : std::sqrt(top);
}

}  // namespace ergocert
