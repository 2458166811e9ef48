#pragma once

// Random generators and independent oracles shared by the unit and
// acceptance suites. Generators may use the library (Gram-Schmidt, Stein
// solver); the oracles rely only on the known construction or on
// complex_rank.

#include <algorithm>
#include <array>
#include <memory>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "qkrein/qkrein.hpp"

namespace qkrein::testing {

using Rng = std::mt19937_64;

inline Quaternion random_quaternion(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng), g(rng), g(rng)};
}

inline QMatrix random_matrix(Rng& rng, std::size_t m, std::size_t n) {
  QMatrix a(m, n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = random_quaternion(rng);
  return a;
}

inline QMatrix random_vector(Rng& rng, std::size_t n) { return random_matrix(rng, n, 1); }

inline QMatrix random_hermitian(Rng& rng, std::size_t n) {
  const QMatrix x = random_matrix(rng, n, n);
  return hermitian_part(x);
}

/// Random quaternionic unitary from Gram-Schmidt on a Gaussian matrix.
inline QMatrix random_unitary(Rng& rng, std::size_t n) {
  QMatrix q;
  do {
    q = orthonormal_columns(random_matrix(rng, n, n));
  } while (q.cols() != n);
  return q;
}

/// U diag(lambda) U* with the given eigenvalues.
inline QMatrix hermitian_with_spectrum(Rng& rng, const std::vector<double>& lambdas) {
  const std::size_t n = lambdas.size();
  const QMatrix u = random_unitary(rng, n);
  std::vector<Quaternion> d(lambdas.begin(), lambdas.end());
  return hermitian_part(u * QMatrix::diagonal(d) * adjoint(u));
}

/// Gram matrix M = U diag(lambdas) U* with known eigenvectors.
struct GramCase {
  QMatrix gram;
  QMatrix u;
  std::vector<double> lambdas;
};

/// n_pos eigenvalues in [0.5, 2], n_neg in [-2, -0.5] and n_zero exact
/// zeros, randomly rotated.
inline GramCase random_gram_case(Rng& rng, std::size_t n_pos, std::size_t n_neg, std::size_t n_zero) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  GramCase g;
  for (std::size_t i = 0; i < n_pos; ++i) g.lambdas.push_back(mag(rng));
  for (std::size_t i = 0; i < n_neg; ++i) g.lambdas.push_back(-mag(rng));
  for (std::size_t i = 0; i < n_zero; ++i) g.lambdas.push_back(0.0);
  std::shuffle(g.lambdas.begin(), g.lambdas.end(), rng);
  g.u = random_unitary(rng, g.lambdas.size());
  std::vector<Quaternion> d(g.lambdas.begin(), g.lambdas.end());
  g.gram = hermitian_part(g.u * QMatrix::diagonal(d) * adjoint(g.u));
  return g;
}

inline QMatrix random_gram(Rng& rng, std::size_t n_pos, std::size_t n_neg, std::size_t n_zero) {
  return random_gram_case(rng, n_pos, n_neg, n_zero).gram;
}

/// Splits n into (n_pos, n_neg, n_zero) uniformly at random; n_zero is 0
/// unless allow_degenerate.
inline std::array<std::size_t, 3> random_signature(Rng& rng, std::size_t n, bool allow_degenerate) {
  std::uniform_int_distribution<std::size_t> pick(0, allow_degenerate ? 2 : 1);
  std::array<std::size_t, 3> sig{};
  for (std::size_t i = 0; i < n; ++i) ++sig[pick(rng)];
  return sig;
}

/// Subspace spanned by structured pieces of a known Gram matrix: neutral
/// vectors u_p / sqrt(l_p) + u_m q / sqrt(-l_m) pairing a positive with a
/// negative direction, single eigen-directions, kernel vectors, and
/// optionally random vectors. Pieces use disjoint eigen-directions, so a
/// subspace without random vectors is degenerate exactly when it contains a
/// neutral pair or a kernel vector. The spanning set is mixed by a random
/// invertible matrix.
struct SubspaceCase {
  std::shared_ptr<const InnerProductSpace> space;
  QMatrix span;
  std::size_t neutral_pairs = 0;
  std::size_t kernel_vectors = 0;
  std::size_t random_vectors = 0;
};

struct SubspaceRecipe {
  bool use_pairs = true;
  bool use_positive = true;
  bool use_negative = true;
  bool use_kernel = true;
  bool use_random = true;
};

inline SubspaceCase random_subspace_case(Rng& rng, const GramCase& g, const SubspaceRecipe& recipe = {}) {
  const std::size_t n = g.lambdas.size();
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t k = 0; k < n; ++k) (g.lambdas[k] > 0 ? pos : g.lambdas[k] < 0 ? neg : zero).push_back(k);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::bernoulli_distribution coin(0.5);
  SubspaceCase sc;
  sc.space = std::make_shared<const InnerProductSpace>(g.gram);
  std::vector<QMatrix> cols;
  auto dir = [&](std::size_t k) { return g.u.col(k) * (1.0 / std::sqrt(std::abs(g.lambdas[k]))); };
  std::size_t ip = 0, in = 0;
  if (recipe.use_pairs)
    while (ip < pos.size() && in < neg.size() && coin(rng)) {
      Quaternion phase = random_quaternion(rng);
      phase = phase / abs(phase);
      cols.push_back(dir(pos[ip++]) + dir(neg[in++]) * phase);
      ++sc.neutral_pairs;
    }
  if (recipe.use_positive)
    for (; ip < pos.size(); ++ip)
      if (coin(rng)) cols.push_back(dir(pos[ip]));
  if (recipe.use_negative)
    for (; in < neg.size(); ++in)
      if (coin(rng)) cols.push_back(dir(neg[in]));
  if (recipe.use_kernel)
    for (std::size_t k : zero)
      if (coin(rng)) {
        cols.push_back(g.u.col(k));
        ++sc.kernel_vectors;
      }
  if (recipe.use_random && cols.size() < n && std::bernoulli_distribution(0.3)(rng)) {
    cols.push_back(random_vector(rng, n));
    ++sc.random_vectors;
  }
  QMatrix span(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) span.set_col(c, cols[c]);
  if (!cols.empty()) span = span * random_unitary(rng, cols.size()) * QMatrix::diagonal(std::vector<Quaternion>(cols.size(), Quaternion(2.0)));
  sc.span = span;
  return sc;
}

/// Stein problem with ||A||_2 <= rho < 1 (so A is stable), y >= 1 and
/// N scaled by n_scale. P is not guaranteed positive definite.
inline SteinProblem random_stein_problem(Rng& rng, std::size_t x, std::size_t y, std::size_t u, double rho,
                                         double n_scale) {
  QMatrix a = random_matrix(rng, x, x);
  const double a_norm = std::sqrt(std::max(0.0, hermitian_eig(hermitian_part(adjoint(a) * a)).lambdas.front()));
  if (a_norm > 0.0) a *= rho / a_norm;
  return {a, random_matrix(rng, y, x), random_matrix(rng, u, x) * n_scale};
}

/// Random stable problem (x <= 4, y <= 3, u <= 2) whose Stein solution is
/// positive definite with margin; retries until one is found.
inline SteinProblem random_positive_stein_problem(Rng& rng) {
  std::uniform_int_distribution<std::size_t> dx(1, 4), dy(1, 3), du(0, 2);
  std::uniform_real_distribution<double> drho(0.1, 0.9), dn(0.05, 0.6);
  for (;;) {
    SteinProblem prob = random_stein_problem(rng, dx(rng), dy(rng), du(rng), drho(rng), dn(rng));
    const HermEig e = hermitian_eig(stein_solve_direct(prob));
    if (e.lambdas.back() > 1e-3 * e.lambdas.front()) return prob;
  }
}

inline double max_entry_diff(const QMatrix& a, const QMatrix& b) { return max_abs(a - b); }

// ---------------------------------------------------------------------------
// Complex oracles
// ---------------------------------------------------------------------------

inline ComplexMatrix complex_product(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b; }

/// Rank of a complex matrix by Gaussian elimination with complete pivoting;
/// pivots at or below tol * scale end the elimination, where scale defaults
/// to max|a_ij|.
inline std::size_t complex_rank(ComplexMatrix a, double tol, double scale = 0.0) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (scale == 0.0)
    for (const auto& e : a.entries()) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) return 0;
  std::size_t r = 0;
  for (; r < std::min(m, n); ++r) {
    std::size_t br = r, bc = r;
    double best = -1.0;
    for (std::size_t i = r; i < m; ++i)
      for (std::size_t j = r; j < n; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          br = i;
          bc = j;
        }
    if (best <= tol * scale) break;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(br, j));
    for (std::size_t i = 0; i < m; ++i) std::swap(a(i, r), a(i, bc));
    for (std::size_t i = r + 1; i < m; ++i) {
      const Complex f = a(i, r) / a(r, r);
      for (std::size_t j = r; j < n; ++j) a(i, j) -= f * a(r, j);
    }
  }
  return r;
}

/// Matrix of rank r: product of random m x r and r x n factors.
inline QMatrix random_rank_matrix(Rng& rng, std::size_t m, std::size_t n, std::size_t r) {
  if (r == 0) return QMatrix(m, n);
  return random_matrix(rng, m, r) * random_matrix(rng, r, n);
}

}  // namespace qkrein::testing
