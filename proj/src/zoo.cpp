/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ergocert/drift.hpp"
#include "ergocert/norms.hpp"
#include "ergocert/spectral.hpp"

namespace ergocert {

namespace {

constexpr double kZooRowTol = 1e-12;

ChainSpec finish(const std::vector<Vec>& raw) {
  const std::size_t n = raw.size();
  Matrix M(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (raw[x].size() != n)
      fail(Err::DimensionMismatch, "generated matrix is not square");
    for (std::size_t y = 0; y < n; ++y) M(x, y) = raw[x][y];
  }
  return validate_chain(M, {}, kZooRowTol);
}

ChainSpec gen_two_state(double a, double b) {
  if (!(a > 0.0) || !(a <= 1.0) || !(b > 0.0) || !(b <= 1.0))
    fail(Err::BadParameters, "two-state rates must lie in (0, 1]");
  return finish({{1.0 - a, a}, {b, 1.0 - b}});
}

ChainSpec gen_cycle(long N) {
  if (N < 2) fail(Err::BadParameters, "cycle needs at least 2 states");
  const std::size_t n = static_cast<std::size_t>(N);
  std::vector<Vec> raw(n, Vec(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) raw[x][(x + 1) % n] = 1.0;
  return finish(std::move(raw));
}

ChainSpec gen_uniform(long N) {
  if (N < 1) fail(Err::BadParameters, "uniform chain needs at least 1 state");
  const std::size_t n = static_cast<std::size_t>(N);
  std::vector<Vec> raw(n, Vec(n, 1.0 / static_cast<double>(n)));
  return finish(std::move(raw));
}

ChainSpec gen_random_dense(long N, std::uint64_t seed) {
  if (N < 2) fail(Err::BadParameters, "random dense chain needs >= 2 states");
  const std::size_t n = static_cast<std::size_t>(N);
  Rng rng(seed);
  std::vector<Vec> raw(n, Vec(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      raw[x][y] = 0.05 + rng.uniform();  // floor keeps the chain primitive
      sum += raw[x][y];
    }
    for (double& e : raw[x]) e /= sum;
  }
  return finish(std::move(raw));
}

ChainSpec gen_random_reversible(long N, std::uint64_t seed) {
  if (N < 2)
    fail(Err::BadParameters, "random reversible chain needs >= 2 states");
  const std::size_t n = static_cast<std::size_t>(N);
  Rng rng(seed);
  // Symmetric positive conductances; row normalisation keeps detailed
  // balance with pi proportional to the row sums.
  std::vector<Vec> M(n, Vec(n, 0.0));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) {
      const double w = 0.05 + rng.uniform();
      M[x][y] = w;
      M[y][x] = w;
    }
  for (std::size_t x = 0; x < n; ++x) {
    double sum = 0.0;
    for (double e : M[x]) sum += e;
    for (double& e : M[x]) e /= sum;
  }
  return finish(std::move(M));
}

ChainSpec gen_metropolis(long width, Vec weights, std::uint64_t seed) {
  if (width < 2) fail(Err::BadParameters, "metropolis grid needs width >= 2");
  const std::size_t n = static_cast<std::size_t>(width);
  if (weights.empty()) {
    Rng rng(seed);
    weights.resize(n);
    for (double& w : weights) w = rng.uniform(0.5, 2.0);
  }
  if (weights.size() != n)
    fail(Err::BadParameters, "target weights must match the grid width");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      fail(Err::BadParameters, "target weights must be positive and finite");

  // Propose +/-1 with probability 1/2 each, accept with min(1, w(y)/w(x));
  // out-of-range proposals are rejected in place, so the endpoints hold
  // mass and the walk is aperiodic.
  std::vector<Vec> raw(n, Vec(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    double move = 0.0;
    if (x + 1 < n) {
      raw[x][x + 1] = 0.5 * std::min(1.0, weights[x + 1] / weights[x]);
      move += raw[x][x + 1];
    }
    if (x > 0) {
      raw[x][x - 1] = 0.5 * std::min(1.0, weights[x - 1] / weights[x]);
      move += raw[x][x - 1];
    }
    raw[x][x] = 1.0 - move;
  }
  return finish(std::move(raw));
}

ChainSpec gen_heavy_tail(long N, double alpha) {
  if (N < 2) fail(Err::BadParameters, "heavy-tail chain needs >= 2 states");
  if (!(alpha > 1.0)) fail(Err::BadParameters, "alpha must exceed 1");
  const std::size_t n = static_cast<std::size_t>(N);

  // Birth-death rates in exact detailed balance with pi ~ (x+1)^{-alpha}:
  //   up(x)   =  c (x+1)^{-alpha}
  //   down(y) =  c y^{-2 alpha} (y+1)^{alpha}
  // scaled so every state keeps holding mass >= 1/2 (the spectrum then sits
  // in [0, 1] and the gap is a clean monotone-degradation observable).
  auto up_raw = [&](std::size_t x) {
    return std::pow(static_cast<double>(x + 1), -alpha);
  };
  auto down_raw = [&](std::size_t y) {
    return std::pow(static_cast<double>(y), -2.0 * alpha) *
           std::pow(static_cast<double>(y + 1), alpha);
  };
  double peak = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    if (x + 1 < n) s += up_raw(x);
    if (x > 0) s += down_raw(x);
    peak = std::max(peak, s);
  }
  const double c = 0.5 / peak;

  std::vector<Vec> raw(n, Vec(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    double move = 0.0;
    if (x + 1 < n) {
      raw[x][x + 1] = c * up_raw(x);
      move += raw[x][x + 1];
    }
    if (x > 0) {
      raw[x][x - 1] = c * down_raw(x);
      move += raw[x][x - 1];
    }
    raw[x][x] = 1.0 - move;
  }
  return finish(std::move(raw));
}

ChainSpec gen_lazy(const ZooRecipe& base, double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    fail(Err::BadParameters, "laziness must lie in (0, 1)");
  const ChainSpec inner = generate(base);
  const std::size_t n = inner.size();
  std::vector<Vec> raw(n, Vec(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y)
      raw[x][y] = (1.0 - epsilon) * inner.P(x, y);
    raw[x][x] += epsilon;
  }
  return finish(std::move(raw));
}

}  // namespace

ZooRecipe ZooRecipe::two_state(double a, double b) {
  ZooRecipe r;
  r.kind = Kind::TwoState;
  r.a = a;
  r.b = b;
  return r;
}

ZooRecipe ZooRecipe::cycle(long N) {
  ZooRecipe r;
  r.kind = Kind::Cycle;
  r.N = N;
  return r;
}

ZooRecipe ZooRecipe::uniform(long N) {
  ZooRecipe r;
  r.kind = Kind::Uniform;
  r.N = N;
  return r;
}

ZooRecipe ZooRecipe::random_dense(long N, std::uint64_t seed) {
  ZooRecipe r;
  r.kind = Kind::RandomDense;
  r.N = N;
  r.seed = seed;
  return r;
}

ZooRecipe ZooRecipe::random_reversible(long N, std::uint64_t seed) {
  ZooRecipe r;
  r.kind = Kind::RandomReversible;
  r.N = N;
  r.seed = seed;
  return r;
}

ZooRecipe ZooRecipe::metropolis_grid(long width, Vec target_weights,
                                     std::uint64_t seed) {
  ZooRecipe r;
  r.kind = Kind::MetropolisGrid;
  r.width = width;
  r.target_weights = std::move(target_weights);
  r.seed = seed;
  return r;
}

ZooRecipe ZooRecipe::truncated_heavy_tail(long N, double alpha) {
  ZooRecipe r;
  r.kind = Kind::TruncatedHeavyTail;
  r.N = N;
  r.alpha = alpha;
  return r;
}

ZooRecipe ZooRecipe::lazy(ZooRecipe base, double epsilon) {
  ZooRecipe r;
  r.kind = Kind::Lazy;
  r.epsilon = epsilon;
  r.base = std::make_shared<ZooRecipe>(std::move(base));
  return r;
}

ZooRecipe ZooRecipe::with_size(long size) const {
  ZooRecipe r = *this;
  switch (kind) {
    case Kind::TwoState:
      break;
    case Kind::MetropolisGrid:
      r.width = size;
      if (!r.target_weights.empty() &&
          r.target_weights.size() != static_cast<std::size_t>(size))
        r.target_weights.clear();  // fall back to seeded weights
      break;
    case Kind::Lazy:
      if (base) r.base = std::make_shared<ZooRecipe>(base->with_size(size));
      break;
    default:
      r.N = size;
      break;
  }
  return r;
}

ChainSpec generate(const ZooRecipe& recipe) {
  switch (recipe.kind) {
    case ZooRecipe::Kind::TwoState:
      return gen_two_state(recipe.a, recipe.b);
    case ZooRecipe::Kind::Cycle:
      return gen_cycle(recipe.N);
    case ZooRecipe::Kind::Uniform:
      return gen_uniform(recipe.N);
    case ZooRecipe::Kind::RandomDense:
      return gen_random_dense(recipe.N, recipe.seed);
    case ZooRecipe::Kind::RandomReversible:
      return gen_random_reversible(recipe.N, recipe.seed);
    case ZooRecipe::Kind::MetropolisGrid:
      return gen_metropolis(recipe.width, recipe.target_weights, recipe.seed);
    case ZooRecipe::Kind::TruncatedHeavyTail:
      return gen_heavy_tail(recipe.N, recipe.alpha);
    case ZooRecipe::Kind::Lazy:
      if (!recipe.base)
        fail(Err::BadParameters, "lazy recipe is missing its base");
      return gen_lazy(*recipe.base, recipe.epsilon);
  }
  fail(Err::BadParameters, "unknown zoo recipe kind");
}

std::vector<DegradationRow> degradation_study(const ZooRecipe& family,
                                              const std::vector<long>& sizes,
                                              const ConditionConfig& config) {
  std::vector<DegradationRow> rows;
  for (long size : sizes) {
    const ChainSpec chain = generate(family.with_size(size));
    const StationaryDist pi = stationary(chain);
    const StructureReport srep = structure(chain);

    DegradationRow row;
    row.size = size;
    if (srep.reversible) {
      row.gap = reversible_spectrum(chain, pi).gap;
    } else {
      GelfandOptions opts;
      opts.exec = config.exec;
      row.gap = 1.0 - gelfand_radius(
                          deviation_kernel(chain, pi),
                          OperatorNorm::linf_v(WeightFunction::ones(chain.size())),
                          opts)
                          .radius;
    }
    row.kappa_star = kappa_star(chain, default_small_set(pi));
    const auto tv =
        cond_pointwise_tv(chain, pi, config.n_max, config.exec);
    if (const auto* g = std::get_if<GeometricRate>(&tv[0].certificate))
      row.fitted_rho = g->rho;
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const DegradationRow& a, const DegradationRow& b) {
              return a.size < b.size;
            });
  return rows;
}

}  // namespace ergocert
