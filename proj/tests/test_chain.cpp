/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ergocert/chain.hpp"
#include "ergocert/core.hpp"
#include "ergocert/zoo.hpp"

using namespace ergocert;

namespace {

Matrix two_state_raw(double a = 0.3, double b = 0.2) {
  Matrix P(2);
  P(0, 0) = 1 - a; P(0, 1) = a;
  P(1, 0) = b;     P(1, 1) = 1 - b;
  return P;
}

Err thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Err::BadParameters;
}

}  // namespace

TEST_CASE("validate_chain accepts, labels and renormalises") {
  Matrix raw = two_state_raw();
  raw(0, 0) += 5e-10;  // within default row_tol
  const ChainSpec chain = validate_chain(raw);
  CHECK(chain.size() == 2);
  CHECK(chain.states == std::vector<std::string>{"s0", "s1"});
  for (std::size_t x = 0; x < 2; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < 2; ++y) s += chain.P(x, y);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("validate_chain error taxonomy") {
  CHECK(thrown_code([] { validate_chain(Matrix()); }) == Err::BadParameters);

  Matrix neg = two_state_raw();
  neg(0, 1) = -0.3;
  neg(0, 0) = 1.3;
  CHECK(thrown_code([&] { validate_chain(neg); }) == Err::NegativeEntry);

  Matrix bad = two_state_raw();
  bad(1, 1) = 0.9;  // row 1 sums to 1.1
  CHECK(thrown_code([&] { validate_chain(bad); }) ==
        Err::RowSumOutOfTolerance);

  CHECK(thrown_code([] {
          validate_chain(two_state_raw(), {"a"});
        }) == Err::DimensionMismatch);
  CHECK(thrown_code([] {
          validate_chain(two_state_raw(), {"a", "a"});
        }) == Err::BadParameters);
  CHECK(thrown_code([] { validate_chain(two_state_raw(), {}, 0.0); }) ==
        Err::BadParameters);
}

TEST_CASE("stationary solves pi P = pi for the two-state chain") {
  const ChainSpec chain = validate_chain(two_state_raw());
  const StationaryDist pi = stationary(chain);
  CHECK(pi.pi[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(pi.pi[1] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("stationary residual stays below the documented bound") {
  const ChainSpec chain = generate(ZooRecipe::random_dense(17, 99));
  const StationaryDist pi = stationary(chain);
  double mass = 0.0;
  Vec piP(17, 0.0);
  for (std::size_t y = 0; y < 17; ++y)
    for (std::size_t x = 0; x < 17; ++x) piP[y] += pi.pi[x] * chain.P(x, y);
  double resid = 0.0;
  for (std::size_t y = 0; y < 17; ++y) {
    resid = std::max(resid, std::abs(piP[y] - pi.pi[y]));
    mass += pi.pi[y];
  }
  CHECK(resid <= 1e-12 * 17);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stationary rejects reducible chains") {
  CHECK(thrown_code([] {
          stationary(validate_chain(Matrix::identity(2)));
        }) == Err::NotIrreducible);
}

TEST_CASE("structure classifies the menagerie") {
  SUBCASE("aperiodic reversible two-state") {
    const StructureReport s = structure(validate_chain(two_state_raw()));
    CHECK(s.irreducible);
    CHECK(s.period == 1);
    CHECK(s.aperiodic);
    CHECK(s.reversible);
    CHECK(s.num_recurrent_classes == 1);
    CHECK(s.reversibility_residual <= 1e-14);
  }
  SUBCASE("three-cycle: periodic, not reversible") {
    const StructureReport s = structure(generate(ZooRecipe::cycle(3)));
    CHECK(s.irreducible);
    CHECK(s.period == 3);
    CHECK(!s.aperiodic);
    CHECK(!s.reversible);
  }
  SUBCASE("two-cycle: periodic but reversible") {
    const StructureReport s = structure(generate(ZooRecipe::cycle(2)));
    CHECK(s.irreducible);
    CHECK(s.period == 2);
    CHECK(s.reversible);
  }
  SUBCASE("identity: two recurrent classes") {
    const StructureReport s = structure(validate_chain(Matrix::identity(2)));
    CHECK(!s.irreducible);
    CHECK(s.num_recurrent_classes == 2);
  }
  SUBCASE("one transient plus one absorbing class") {
    Matrix M(3);
    M(0, 0) = 0.5; M(0, 1) = 0.5;                    // transient
    M(1, 1) = 0.3; M(1, 2) = 0.7;
    M(2, 1) = 0.4; M(2, 2) = 0.6;                    // recurrent {1,2}
    const StructureReport s = structure(validate_chain(M));
    CHECK(!s.irreducible);
    CHECK(s.num_recurrent_classes == 1);
  }
}

TEST_CASE("kernel_power agrees with repeated multiplication") {
  const ChainSpec chain = generate(ZooRecipe::random_dense(6, 3));
  Matrix ref = chain.P;
  for (long n = 1; n <= 6; ++n) {
    const Matrix Pn = kernel_power(chain, n);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        CHECK(Pn(i, j) == doctest::Approx(ref(i, j)).epsilon(1e-13));
    ref = kernels::matmul(ref, chain.P);
  }
  CHECK(kernel_power(chain, 0) == Matrix::identity(6));
  CHECK(thrown_code([&] { kernel_power(chain, -1); }) == Err::BadParameters);
}

TEST_CASE("stationary projector and deviation kernel identities") {
  const ChainSpec chain = validate_chain(two_state_raw());
  const StationaryDist pi = stationary(chain);
  const Matrix Pi = stationary_projector(pi);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      CHECK(Pi(x, y) == pi.pi[y]);

  const Matrix D = deviation_kernel(chain, pi);
  CHECK(D(0, 0) == doctest::Approx(0.7 - 0.4).epsilon(1e-14));
  CHECK(D(0, 1) == doctest::Approx(0.3 - 0.6).epsilon(1e-14));

  // (P - Pi)^2 = P^2 - Pi: the identity every decay computation relies on.
  const Matrix D2 = kernels::matmul(D, D);
  const Matrix P2 = kernel_power(chain, 2);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      CHECK(D2(x, y) == doctest::Approx(P2(x, y) - pi.pi[y]).epsilon(1e-14));
}
