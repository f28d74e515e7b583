/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ergocert/chain.hpp"
#include "ergocert/conditions.hpp"
#include "ergocert/core.hpp"

namespace ergocert {

// Deterministic generators for the test menagerie.  Every generated matrix
// passes validate_chain with row_tol 1e-12, and generation is a pure
// function of the recipe (seeded randomness uses the project Rng).
struct ZooRecipe {
  enum class Kind {
    TwoState,           // [[1-a, a], [b, 1-b]]
    Cycle,              // deterministic N-cycle (period N)
    Uniform,            // all entries 1/N
    RandomDense,        // floored uniform entries, row-normalised
    RandomReversible,   // symmetric positive M, rows normalised; pi ~ row sums
    MetropolisGrid,     // +/-1 Metropolis walk on a path targeting weights
    TruncatedHeavyTail, // birth-death with up-rate ~ (x+1)^{-alpha}
    Lazy,               // epsilon I + (1-epsilon) base
  };

  Kind kind = Kind::TwoState;
  double a = 0.3, b = 0.2;        // TwoState
  long N = 2;                     // Cycle/Uniform/RandomDense/.../HeavyTail
  std::uint64_t seed = 0;         // RandomDense/RandomReversible/Metropolis
  double alpha = 2.5;             // TruncatedHeavyTail
  double epsilon = 0.5;           // Lazy
  long width = 8;                 // MetropolisGrid
  Vec target_weights;             // MetropolisGrid (random from seed if empty)
  std::shared_ptr<ZooRecipe> base;  // Lazy

  static ZooRecipe two_state(double a, double b);
  static ZooRecipe cycle(long N);
  static ZooRecipe uniform(long N);
  static ZooRecipe random_dense(long N, std::uint64_t seed);
  static ZooRecipe random_reversible(long N, std::uint64_t seed);
  static ZooRecipe metropolis_grid(long width, Vec target_weights,
                                   std::uint64_t seed);
  static ZooRecipe truncated_heavy_tail(long N, double alpha);
  static ZooRecipe lazy(ZooRecipe base, double epsilon);

  // Same recipe with the size parameter replaced (families in a
  // degradation study; TwoState ignores it).
  ZooRecipe with_size(long size) const;
};

// Throws BadParameters on invalid recipe parameters.
ChainSpec generate(const ZooRecipe& recipe);

struct DegradationRow {
  long size = 0;
  double gap = 0.0;         // eigen gap when reversible, else
                            // 1 - gelfand_radius(P - Pi, L^inf_{V=1})
  double kappa_star = 0.0;  // for S = argmax-pi singleton
  double fitted_rho = 0.0;  // pointwise TV fit
};

// Evaluates the family at each size, rows sorted by size.
std::vector<DegradationRow> degradation_study(
    const ZooRecipe& family, const std::vector<long>& sizes,
    const ConditionConfig& config = {});

}  // namespace ergocert
