/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergocert {

using Vec = std::vector<double>;

// Failure taxonomy shared by every module.  Operations throw Error with one
// of these codes; infinities produced by norm definitions are *values*, not
// errors.
enum class Err {
  NegativeEntry,
  RowSumOutOfTolerance,
  DimensionMismatch,
  NotIrreducible,
  NotProbability,
  ZeroStationaryMass,
  NormEvaluation,
  EmptySet,
  KappaBeyondRadius,
  NotReversible,
  SNotSmall,
  VBelowOne,
  MeasureNotInLp,
  EmptyWindow,
  BadParameters,
};

const char* err_name(Err code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code_(code) {}

  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
  throw Error(code, msg);
}

// Dense square matrix, row-major.  All kernels in this project operate on
// square matrices (transition kernels, their powers, taboo restrictions).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  double* row(std::size_t i) { return a_.data() + i * n_; }
  const double* row(std::size_t i) const { return a_.data() + i * n_; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// Deterministic pseudo-random source.  The 53-bit conversion is done by hand
// because std::uniform_real_distribution is implementation-defined; seeded
// batteries must regenerate bit-identically everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [0, m).
  std::uint64_t below(std::uint64_t m) { return eng_() % m; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ergocert
