/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

namespace ergocert {

namespace {

// Strongly connected components of the support digraph (edge x -> y iff
// P(x,y) > 0) by iterative Kosaraju.  Component ids come out in reverse
// topological order of the condensation.
struct SccResult {
  std::vector<long> comp;
  long num_components = 0;
};

SccResult strongly_connected_components(const Matrix& P) {
  const std::size_t n = P.size();
  std::vector<std::vector<std::size_t>> adj(n), radj(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (P(x, y) > 0.0) {
        adj[x].push_back(y);
        radj[y].push_back(x);
      }

  std::vector<char> seen(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    stack.emplace_back(s, 0);
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [u, it] = stack.back();
      if (it < adj[u].size()) {
        const std::size_t v = adj[u][it++];
        if (!seen[v]) {
          seen[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }

  SccResult res;
  res.comp.assign(n, -1);
  std::vector<std::size_t> dfs;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (res.comp[*it] >= 0) continue;
    const long id = res.num_components++;
    dfs.push_back(*it);
    res.comp[*it] = id;
    while (!dfs.empty()) {
      const std::size_t u = dfs.back();
      dfs.pop_back();
      for (std::size_t v : radj[u])
        if (res.comp[v] < 0) {
          res.comp[v] = id;
          dfs.push_back(v);
        }
    }
  }
  return res;
}

// Period of the communicating class containing state 0: BFS levels within
// the class, then gcd over intra-class support edges of
// level(u) + 1 - level(v).  gcd 0 (no closed walk found) counts as 1.
long class_period(const Matrix& P, const std::vector<long>& comp) {
  const std::size_t n = P.size();
  const long home = comp[0];
  std::vector<long> level(n, -1);
  std::vector<std::size_t> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (std::size_t v = 0; v < n; ++v)
      if (P(u, v) > 0.0 && comp[v] == home && level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
  }
  long g = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (comp[u] != home) continue;
    for (std::size_t v = 0; v < n; ++v)
      if (P(u, v) > 0.0 && comp[v] == home)
        g = std::gcd(g, level[u] + 1 - level[v]);
  }
  return g == 0 ? 1 : std::abs(g);
}

}  // namespace

ChainSpec validate_chain(const Matrix& raw, std::vector<std::string> labels,
                         double row_tol) {
  const std::size_t n = raw.size();
  if (n == 0) fail(Err::BadParameters, "empty transition matrix");
  if (!(row_tol > 0.0)) fail(Err::BadParameters, "row tolerance must be > 0");
  if (!labels.empty()) {
    if (labels.size() != n)
      fail(Err::DimensionMismatch, "state label count " +
                                       std::to_string(labels.size()) +
                                       " vs matrix size " + std::to_string(n));
    std::unordered_set<std::string> uniq(labels.begin(), labels.end());
    if (uniq.size() != labels.size())
      fail(Err::BadParameters, "duplicate state labels");
  }

  ChainSpec spec;
  spec.P = raw;
  spec.row_tol = row_tol;
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double p = raw(x, y);
      if (!(p >= 0.0))
        fail(Err::NegativeEntry, "P(" + std::to_string(x) + "," +
                                     std::to_string(y) + ") = " +
                                     std::to_string(p));
      s += p;
    }
    if (std::abs(s - 1.0) > row_tol)
      fail(Err::RowSumOutOfTolerance,
           "row " + std::to_string(x) + " sums to " + std::to_string(s));
    // Renormalise so downstream exact identities (e.g. (P - Pi)^n = P^n - Pi)
    // hold to machine precision rather than row_tol.
    for (std::size_t y = 0; y < n; ++y) spec.P(x, y) = raw(x, y) / s;
  }

  if (labels.empty()) {
    spec.states.reserve(n);
    for (std::size_t x = 0; x < n; ++x)
      spec.states.push_back("s" + std::to_string(x));
  } else {
    spec.states = std::move(labels);
  }
  return spec;
}

StationaryDist stationary(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  const auto scc = strongly_connected_components(chain.P);
  if (scc.num_components != 1)
    fail(Err::NotIrreducible, "support digraph has " +
                                  std::to_string(scc.num_components) +
                                  " strongly connected components");

  // Solve pi^T P = pi^T with normalisation sum(pi) = 1: take (P^T - I) and
  // replace the last (redundant) equation by the all-ones row.
  Eigen::MatrixXd A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          chain.P(j, i) - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j)
    A(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(j)) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  rhs(static_cast<Eigen::Index>(n - 1)) = 1.0;
  const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);

  StationaryDist dist;
  dist.pi.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = sol(static_cast<Eigen::Index>(i));
    if (v < 0.0) {
      // Irreducibility guarantees pi > 0; anything beyond roundoff means the
      // solve went wrong rather than the chain being degenerate.
      if (v < -1e-9)
        fail(Err::ZeroStationaryMass, "state " + std::to_string(i) +
                                          " solved to mass " +
                                          std::to_string(v));
      v = 0.0;
    }
    dist.pi[i] = v;
    total += v;
  }
  if (total <= 0.0) fail(Err::ZeroStationaryMass, "stationary mass vanished");
  for (double& v : dist.pi) v /= total;
  for (std::size_t i = 0; i < n; ++i)
    if (dist.pi[i] <= 0.0)
      fail(Err::ZeroStationaryMass,
           "state " + std::to_string(i) + " has zero stationary mass");

  double residual = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < n; ++x) s += dist.pi[x] * chain.P(x, y);
    residual = std::max(residual, std::abs(s - dist.pi[y]));
  }
  if (residual > 1e-12 * static_cast<double>(n))
    fail(Err::ZeroStationaryMass,
         "stationary solve residual " + std::to_string(residual));
  return dist;
}

StructureReport structure(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  const auto scc = strongly_connected_components(chain.P);
  StructureReport rep;
  rep.irreducible = (scc.num_components == 1);

  // Recurrent classes = components no support edge leaves.
  std::vector<char> leaks(static_cast<std::size_t>(scc.num_components), 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (chain.P(x, y) > 0.0 && scc.comp[x] != scc.comp[y])
        leaks[static_cast<std::size_t>(scc.comp[x])] = 1;
  rep.num_recurrent_classes =
      std::count(leaks.begin(), leaks.end(), static_cast<char>(0));

  rep.period = class_period(chain.P, scc.comp);
  rep.aperiodic = rep.irreducible && rep.period == 1;

  rep.reversible = false;
  rep.reversibility_residual = 0.0;
  if (rep.irreducible) {
    const StationaryDist dist = stationary(chain);
    double max_flow_gap = 0.0;
    double max_entry = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const double fwd = dist.pi[x] * chain.P(x, y);
        const double bwd = dist.pi[y] * chain.P(y, x);
        max_flow_gap = std::max(max_flow_gap, std::abs(fwd - bwd));
        max_entry = std::max(max_entry, std::max(fwd, bwd));
      }
    rep.reversibility_residual =
        max_entry > 0.0 ? max_flow_gap / max_entry : 0.0;
    rep.reversible = rep.reversibility_residual <= 1e-10;
  }
  return rep;
}

Matrix kernel_power(const ChainSpec& chain, long n, kernels::Exec exec) {
  if (n < 0) fail(Err::BadParameters, "negative kernel power");
  const std::size_t dim = chain.size();
  Matrix result = Matrix::identity(dim);
  if (n == 0) return result;
  Matrix base = chain.P;
  Matrix scratch(dim);
  long e = n;
  bool result_is_identity = true;
  while (e > 0) {
    if (e & 1) {
      if (result_is_identity) {
        result = base;
        result_is_identity = false;
      } else {
        kernels::matmul(scratch, result, base, exec);
        std::swap(result, scratch);
      }
    }
    e >>= 1;
    if (e > 0) {
      kernels::matmul(scratch, base, base, exec);
      std::swap(base, scratch);
    }
  }
  return result;
}

Matrix stationary_projector(const StationaryDist& pi) {
  const std::size_t n = pi.pi.size();
  Matrix Pi(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) Pi(x, y) = pi.pi[y];
  return Pi;
}

Matrix deviation_kernel(const ChainSpec& chain, const StationaryDist& pi) {
  const std::size_t n = chain.size();
  if (pi.pi.size() != n)
    fail(Err::DimensionMismatch, "stationary length vs chain size");
  Matrix D(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) D(x, y) = chain.P(x, y) - pi.pi[y];
  return D;
}

}  // namespace ergocert
