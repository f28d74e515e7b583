/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ergocert::kernels {

namespace {

// Work sizes below this run serially even under Exec::Auto; thread fan-out
// costs more than the loop for the small chains the test batteries use.
constexpr std::size_t kAutoParallelMinDim = 96;

bool run_parallel(Exec exec, std::size_t n) {
#if defined(_OPENMP)
  switch (exec) {
    case Exec::Serial:
      return false;
    case Exec::Parallel:
      return true;
    case Exec::Auto:
      return n >= kAutoParallelMinDim && omp_get_max_threads() > 1;
  }
  return false;
#else
  (void)exec;
  (void)n;
  return false;
#endif
}

// One output row of C = A * B; identical arithmetic order in both paths.
inline void matmul_row(double* c, const Matrix& A, const Matrix& B,
                       std::size_t i) {
  const std::size_t n = A.size();
  const double* a = A.row(i);
  std::fill(c, c + n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double aik = a[k];
    if (aik == 0.0) continue;
    const double* b = B.row(k);
    for (std::size_t j = 0; j < n; ++j) c[j] += aik * b[j];
  }
}

struct RowCost {
  // Objective value of the V,0 row problem: min_c sum_y |k[y] - c pi[y]| V[y]
  // solved exactly.  Terms with pi[y] = 0 contribute constants; the rest is
  // a weighted median in the breakpoints k[y]/pi[y] with weights pi[y] V[y].
  static double v0_row(const double* k, const Vec& V, const Vec& pi,
                       std::vector<std::pair<double, double>>& breakpoints) {
    const std::size_t n = V.size();
    double constant = 0.0;
    double total_weight = 0.0;
    breakpoints.clear();
    for (std::size_t y = 0; y < n; ++y) {
      if (pi[y] > 0.0) {
        const double w = pi[y] * V[y];
        breakpoints.emplace_back(k[y] / pi[y], w);
        total_weight += w;
      } else {
        constant += std::abs(k[y]) * V[y];
      }
    }
    if (breakpoints.empty()) return constant;
    std::sort(breakpoints.begin(), breakpoints.end());
    const double half = 0.5 * total_weight;
    double cum = 0.0;
    double c_star = breakpoints.back().first;
    for (const auto& [t, w] : breakpoints) {
      cum += w;
      if (cum >= half) {
        c_star = t;
        break;
      }
    }
    double value = constant;
    for (std::size_t y = 0; y < n; ++y)
      value += std::abs(k[y] - c_star * pi[y]) * V[y];
    return value;
  }
};

}  // namespace

int hardware_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void matmul(Matrix& C, const Matrix& A, const Matrix& B, Exec exec) {
  const std::size_t n = A.size();
  if (B.size() != n) fail(Err::DimensionMismatch, "matmul operand sizes");
  if (C.size() != n) C = Matrix(n);
  if (run_parallel(exec, n)) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      matmul_row(C.row(static_cast<std::size_t>(i)), A, B,
                 static_cast<std::size_t>(i));
#endif
  } else {
    for (std::size_t i = 0; i < n; ++i) matmul_row(C.row(i), A, B, i);
  }
}

Matrix matmul(const Matrix& A, const Matrix& B, Exec exec) {
  Matrix C(A.size());
  matmul(C, A, B, exec);
  return C;
}

double max_abs(const Matrix& A) {
  const std::size_t total = A.size() * A.size();
  const double* a = A.data();
  double m = 0.0;
  for (std::size_t i = 0; i < total; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

bool ScaledPower::is_zero() const { return max_abs(M) == 0.0; }

void rescale(ScaledPower& p) {
  const double m = max_abs(p.M);
  if (m == 0.0 || m == 1.0) return;
  const std::size_t total = p.M.size() * p.M.size();
  double* a = p.M.data();
  const double inv = 1.0 / m;
  for (std::size_t i = 0; i < total; ++i) a[i] *= inv;
  p.log_scale += std::log(m);
}

ScaledPower scaled_square(const ScaledPower& p, Exec exec) {
  ScaledPower q;
  q.M = matmul(p.M, p.M, exec);
  q.log_scale = 2.0 * p.log_scale;
  q.n = 2 * p.n;
  rescale(q);
  return q;
}

PowerWalk::PowerWalk(Matrix K, Exec exec)
    : k_(std::move(K)), scratch_(k_.size()), exec_(exec) {
  cur_.M = k_;
  cur_.log_scale = 0.0;
  cur_.n = 1;
  rescale(cur_);
}

const ScaledPower& PowerWalk::step() {
  matmul(scratch_, cur_.M, k_, exec_);
  std::swap(cur_.M, scratch_);
  cur_.n += 1;
  rescale(cur_);
  return cur_;
}

Vec row_abs_weighted_sums(const Matrix& K, const Vec& w, Exec exec) {
  const std::size_t n = K.size();
  if (w.size() != n) fail(Err::DimensionMismatch, "weight length vs matrix");
  Vec out(n, 0.0);
  auto row_sum = [&](std::size_t x) {
    const double* k = K.row(x);
    double s = 0.0;
    for (std::size_t y = 0; y < n; ++y) s += std::abs(k[y]) * w[y];
    out[x] = s;
  };
  if (run_parallel(exec, n)) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(n); ++x)
      row_sum(static_cast<std::size_t>(x));
#endif
  } else {
    for (std::size_t x = 0; x < n; ++x) row_sum(x);
  }
  return out;
}

double linf_v_norm(const Matrix& K, const Vec& V, Exec exec) {
  const Vec sums = row_abs_weighted_sums(K, V, exec);
  double norm = 0.0;
  for (std::size_t x = 0; x < sums.size(); ++x)
    norm = std::max(norm, sums[x] / V[x]);
  return norm;
}

double linf_v0_norm(const Matrix& K, const Vec& V, const Vec& pi, Exec exec) {
  const std::size_t n = K.size();
  if (V.size() != n || pi.size() != n)
    fail(Err::DimensionMismatch, "weight/stationary length vs matrix");
  Vec vals(n, 0.0);
  if (run_parallel(exec, n)) {
#if defined(_OPENMP)
#pragma omp parallel
    {
      std::vector<std::pair<double, double>> breakpoints;
      breakpoints.reserve(n);
#pragma omp for schedule(static)
      for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(n); ++x) {
        const auto xi = static_cast<std::size_t>(x);
        vals[xi] = RowCost::v0_row(K.row(xi), V, pi, breakpoints) / V[xi];
      }
    }
#endif
  } else {
    std::vector<std::pair<double, double>> breakpoints;
    breakpoints.reserve(n);
    for (std::size_t x = 0; x < n; ++x)
      vals[x] = RowCost::v0_row(K.row(x), V, pi, breakpoints) / V[x];
  }
  double norm = 0.0;
  for (double v : vals) norm = std::max(norm, v);
  return norm;
}

double offdiag_frobenius(const Matrix& A) {
  const std::size_t n = A.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += A(i, j) * A(i, j);
  return std::sqrt(s);
}

namespace {

struct Rotation {
  std::size_t p, q;
  double c, s;
};

// Round-robin tournament schedule: N-1 rounds (N padded to even), each a set
// of disjoint index pairs covering all off-diagonal positions once.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>>
tournament_rounds(std::size_t n) {
  const std::size_t m = (n % 2 == 0) ? n : n + 1;  // m-1 is a "bye" when odd
  std::vector<std::size_t> ring(m);
  std::iota(ring.begin(), ring.end(), 0);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rounds;
  rounds.reserve(m - 1);
  for (std::size_t r = 0; r + 1 < m; ++r) {
    std::vector<std::pair<std::size_t, std::size_t>> round;
    round.reserve(m / 2);
    for (std::size_t k = 0; k < m / 2; ++k) {
      std::size_t a = (k == 0) ? ring[0] : ring[k];
      std::size_t b = ring[m - 1 - k];
      if (a < n && b < n) round.emplace_back(std::min(a, b), std::max(a, b));
    }
    if (!round.empty()) rounds.push_back(std::move(round));
    // rotate all but the fixed first element
    std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
  }
  return rounds;
}

Rotation make_rotation(const Matrix& A, std::size_t p, std::size_t q) {
  const double apq = A(p, q);
  Rotation rot{p, q, 1.0, 0.0};
  if (apq == 0.0) return rot;
  const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
  const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
  rot.c = 1.0 / std::sqrt(1.0 + t * t);
  rot.s = t * rot.c;
  return rot;
}

inline void apply_row_rotation(Matrix& A, const Rotation& r) {
  const std::size_t n = A.size();
  double* rp = A.row(r.p);
  double* rq = A.row(r.q);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = rp[j], b = rq[j];
    rp[j] = r.c * a - r.s * b;
    rq[j] = r.s * a + r.c * b;
  }
}

inline void apply_col_rotation(Matrix& A, const Rotation& r) {
  const std::size_t n = A.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = A(i, r.p), b = A(i, r.q);
    A(i, r.p) = r.c * a - r.s * b;
    A(i, r.q) = r.s * a + r.c * b;
  }
}

}  // namespace

Vec jacobi_eigenvalues(Matrix A, Exec exec, double off_tol, int max_sweeps) {
  const std::size_t n = A.size();
  if (n == 0) return {};
  if (n == 1) return {A(0, 0)};
  const auto rounds = tournament_rounds(n);
  const bool parallel = run_parallel(exec, n);
  std::vector<Rotation> rots;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_frobenius(A) < off_tol) break;
    for (const auto& round : rounds) {
      rots.resize(round.size());
      // Angles come from entries no other pair in the round touches, so the
      // row phase can compute them in place.
      if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(round.size());
             ++k) {
          const auto& [p, q] = round[static_cast<std::size_t>(k)];
          rots[static_cast<std::size_t>(k)] = make_rotation(A, p, q);
          apply_row_rotation(A, rots[static_cast<std::size_t>(k)]);
        }
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(round.size());
             ++k)
          apply_col_rotation(A, rots[static_cast<std::size_t>(k)]);
#endif
      } else {
        for (std::size_t k = 0; k < round.size(); ++k) {
          const auto& [p, q] = round[k];
          rots[k] = make_rotation(A, p, q);
          apply_row_rotation(A, rots[k]);
        }
        for (std::size_t k = 0; k < round.size(); ++k)
          apply_col_rotation(A, rots[k]);
      }
    }
  }
  Vec eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = A(i, i);
  return eig;
}

}  // namespace ergocert::kernels
