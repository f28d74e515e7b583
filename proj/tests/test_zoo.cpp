/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "ergocert/chain.hpp"
#include "ergocert/core.hpp"
#include "ergocert/zoo.hpp"

using namespace ergocert;

namespace {

Err thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Err::BadParameters;
}

double detailed_balance_residual(const ChainSpec& chain, const Vec& pi) {
  double resid = 0.0;
  for (std::size_t x = 0; x < chain.size(); ++x)
    for (std::size_t y = 0; y < chain.size(); ++y)
      resid = std::max(resid,
                       std::abs(pi[x] * chain.P(x, y) - pi[y] * chain.P(y, x)));
  return resid;
}

}  // namespace

TEST_CASE("every recipe kind generates a valid chain deterministically") {
  const std::vector<ZooRecipe> recipes = {
      ZooRecipe::two_state(0.3, 0.2),
      ZooRecipe::cycle(5),
      ZooRecipe::uniform(4),
      ZooRecipe::random_dense(8, 42),
      ZooRecipe::random_reversible(8, 42),
      ZooRecipe::metropolis_grid(6, {}, 42),
      ZooRecipe::truncated_heavy_tail(10, 2.5),
      ZooRecipe::lazy(ZooRecipe::cycle(4), 0.3),
  };
  for (const ZooRecipe& r : recipes) {
    const ChainSpec a = generate(r);
    const ChainSpec b = generate(r);
    CHECK(a.P == b.P);  // bit-identical regeneration
    CHECK(a.size() > 0);
    for (std::size_t x = 0; x < a.size(); ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < a.size(); ++y) {
        CHECK(a.P(x, y) >= 0.0);
        s += a.P(x, y);
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("two_state places the rates exactly") {
  const ChainSpec chain = generate(ZooRecipe::two_state(0.3, 0.2));
  CHECK(chain.P(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(chain.P(0, 1) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(chain.P(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(chain.P(1, 1) == doctest::Approx(0.8).epsilon(1e-15));

  CHECK(thrown_code([] { generate(ZooRecipe::two_state(0.0, 0.2)); }) ==
        Err::BadParameters);
  CHECK(thrown_code([] { generate(ZooRecipe::two_state(0.3, 1.5)); }) ==
        Err::BadParameters);
}

TEST_CASE("cycle and uniform shapes") {
  const ChainSpec cyc = generate(ZooRecipe::cycle(4));
  for (std::size_t x = 0; x < 4; ++x)
    CHECK(cyc.P(x, (x + 1) % 4) == 1.0);
  CHECK(structure(cyc).period == 4);
  CHECK(thrown_code([] { generate(ZooRecipe::cycle(1)); }) ==
        Err::BadParameters);

  const ChainSpec uni = generate(ZooRecipe::uniform(3));
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      CHECK(uni.P(x, y) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("random_dense is irreducible, aperiodic and floored away from zero") {
  const ChainSpec chain = generate(ZooRecipe::random_dense(9, 7));
  const StructureReport s = structure(chain);
  CHECK(s.irreducible);
  CHECK(s.aperiodic);
  double smallest = 1.0;
  for (std::size_t x = 0; x < 9; ++x)
    for (std::size_t y = 0; y < 9; ++y)
      smallest = std::min(smallest, chain.P(x, y));
  CHECK(smallest > 0.0);
  CHECK(thrown_code([] { generate(ZooRecipe::random_dense(1, 7)); }) ==
        Err::BadParameters);
}

TEST_CASE("random_reversible satisfies detailed balance") {
  const ChainSpec chain = generate(ZooRecipe::random_reversible(7, 19));
  const StructureReport s = structure(chain);
  CHECK(s.irreducible);
  CHECK(s.reversible);
  CHECK(detailed_balance_residual(chain, stationary(chain).pi) <= 1e-12);
}

TEST_CASE("metropolis_grid targets the given weights") {
  const Vec weights = {1.0, 2.0, 0.5, 1.5};
  const ChainSpec chain = generate(ZooRecipe::metropolis_grid(4, weights, 0));
  const StationaryDist pi = stationary(chain);
  const double total = 1.0 + 2.0 + 0.5 + 1.5;
  for (std::size_t x = 0; x < 4; ++x)
    CHECK(pi.pi[x] == doctest::Approx(weights[x] / total).epsilon(1e-10));
  CHECK(structure(chain).reversible);
  CHECK(structure(chain).aperiodic);

  CHECK(thrown_code([] {
          generate(ZooRecipe::metropolis_grid(3, {1.0, 2.0}, 0));
        }) == Err::BadParameters);
  CHECK(thrown_code([] {
          generate(ZooRecipe::metropolis_grid(2, {1.0, -1.0}, 0));
        }) == Err::BadParameters);
}

TEST_CASE("truncated_heavy_tail is lazy, reversible and polynomially tailed") {
  const double alpha = 2.5;
  const ChainSpec chain = generate(ZooRecipe::truncated_heavy_tail(12, alpha));

  // Holding probability at least 1/2 everywhere (guarantees aperiodicity
  // and a nonnegative spectrum).
  for (std::size_t x = 0; x < 12; ++x) CHECK(chain.P(x, x) >= 0.5 - 1e-15);

  // Detailed balance is exact against pi ~ (x+1)^{-alpha} by construction.
  Vec pi(12);
  double total = 0.0;
  for (std::size_t x = 0; x < 12; ++x) {
    pi[x] = std::pow(static_cast<double>(x + 1), -alpha);
    total += pi[x];
  }
  for (double& p : pi) p /= total;
  CHECK(detailed_balance_residual(chain, pi) <= 1e-15);

  const StationaryDist solved = stationary(chain);
  for (std::size_t x = 0; x < 12; ++x)
    CHECK(solved.pi[x] == doctest::Approx(pi[x]).epsilon(1e-10));

  CHECK(thrown_code([] { generate(ZooRecipe::truncated_heavy_tail(5, 1.0)); }) ==
        Err::BadParameters);
}

TEST_CASE("lazy mixes the identity into the base kernel") {
  const ZooRecipe base = ZooRecipe::cycle(3);
  const ChainSpec lazy = generate(ZooRecipe::lazy(base, 0.25));
  const ChainSpec plain = generate(base);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) {
      const double expect =
          0.25 * (x == y ? 1.0 : 0.0) + 0.75 * plain.P(x, y);
      CHECK(lazy.P(x, y) == doctest::Approx(expect).epsilon(1e-15));
    }
  CHECK(structure(lazy).aperiodic);
  CHECK(thrown_code([&] { generate(ZooRecipe::lazy(base, 1.0)); }) ==
        Err::BadParameters);
}

TEST_CASE("with_size re-targets the size parameter across kinds") {
  CHECK(generate(ZooRecipe::uniform(3).with_size(6)).size() == 6);
  CHECK(generate(ZooRecipe::truncated_heavy_tail(10, 2.5).with_size(20)).size()
        == 20);
  CHECK(generate(ZooRecipe::metropolis_grid(4, {1, 2, 3, 4}, 5).with_size(9))
            .size() == 9);
  CHECK(generate(ZooRecipe::lazy(ZooRecipe::cycle(4), 0.5).with_size(7)).size()
        == 7);
  // TwoState has no size knob.
  CHECK(generate(ZooRecipe::two_state(0.3, 0.2).with_size(9)).size() == 2);
}

TEST_CASE("degradation_study reports shrinking gaps for the heavy tail") {
  ConditionConfig cfg;
  cfg.n_max = 64;  // the fitted rho is incidental here; keep the study fast
  const std::vector<DegradationRow> rows = degradation_study(
      ZooRecipe::truncated_heavy_tail(10, 2.5), {20, 10}, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size == 10);
  CHECK(rows[1].size == 20);
  CHECK(rows[0].gap > rows[1].gap);
  CHECK(rows[0].kappa_star > rows[1].kappa_star);
  CHECK(rows[1].kappa_star > 1.0);
  for (const DegradationRow& r : rows) {
    CHECK(r.gap > 0.0);
    CHECK(r.fitted_rho > 0.0);
  }
}
