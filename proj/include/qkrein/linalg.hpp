#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "qkrein/error.hpp"
#include "qkrein/qmatrix.hpp"

namespace qkrein {

// ---------------------------------------------------------------------------
// Linear systems
// ---------------------------------------------------------------------------

/// Solves A X = B by quaternionic Gaussian elimination with partial pivoting
/// on |a_ij|. Row operations multiply from the left, so the noncommutative
/// order is a_ip * inv(a_pp) * row_p.
inline QMatrix solve(const QMatrix& a, const QMatrix& b) {
  if (!a.square()) throw ContractViolation("solve: coefficient matrix must be square");
  if (a.rows() != b.rows()) throw ContractViolation("solve: right-hand side row mismatch");
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();
  QMatrix u = a;
  QMatrix x = b;
  const double pivot_floor = static_cast<double>(std::max<std::size_t>(n, 1)) *
                             std::numeric_limits<double>::epsilon() * max_abs(a);

  for (std::size_t p = 0; p < n; ++p) {
    std::size_t best = p;
    double best_abs = abs(u(p, p));
    for (std::size_t r = p + 1; r < n; ++r) {
      const double v = abs(u(r, p));
      if (v > best_abs) {
        best = r;
        best_abs = v;
      }
    }
    if (best_abs <= pivot_floor || best_abs == 0.0) throw SingularMatrix("solve: matrix is numerically singular");
    if (best != p) {
      for (std::size_t c = 0; c < n; ++c) std::swap(u(p, c), u(best, c));
      for (std::size_t c = 0; c < m; ++c) std::swap(x(p, c), x(best, c));
    }
    const Quaternion pivot_inv = inv(u(p, p));
    for (std::size_t r = p + 1; r < n; ++r) {
      const Quaternion f = u(r, p) * pivot_inv;
      if (f.is_zero()) continue;
      for (std::size_t c = p; c < n; ++c) u(r, c) -= f * u(p, c);
      for (std::size_t c = 0; c < m; ++c) x(r, c) -= f * x(p, c);
    }
  }
  for (std::size_t pp = n; pp-- > 0;) {
    const Quaternion pivot_inv = inv(u(pp, pp));
    for (std::size_t c = 0; c < m; ++c) {
      Quaternion acc = x(pp, c);
      for (std::size_t k = pp + 1; k < n; ++k) acc -= u(pp, k) * x(k, c);
      x(pp, c) = pivot_inv * acc;
    }
  }
  return x;
}

inline QMatrix inverse(const QMatrix& a) { return solve(a, QMatrix::identity(a.rows())); }

/// Real dense solve with partial pivoting; used for linear maps written in
/// real coordinates. `a` is row-major n x n.
inline std::vector<double> solve_real(std::vector<double> a, std::vector<double> b, double relative_pivot_floor) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw ContractViolation("solve_real: shape mismatch");
  // Equilibrate rows, then columns, by powers of two (exact), so the pivot
  // floor is not dominated by a few large entries.
  auto pow2_inverse = [](double m) {
    int e = 0;
    std::frexp(m, &e);
    return std::ldexp(1.0, -e);
  };
  std::vector<double> col_scale(n, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    double m = 0.0;
    for (std::size_t c = 0; c < n; ++c) m = std::max(m, std::abs(a[r * n + c]));
    if (m == 0.0) throw SingularMatrix("solve_real: matrix is numerically singular");
    const double f = pow2_inverse(m);
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] *= f;
    b[r] *= f;
  }
  for (std::size_t c = 0; c < n; ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < n; ++r) m = std::max(m, std::abs(a[r * n + c]));
    if (m == 0.0) throw SingularMatrix("solve_real: matrix is numerically singular");
    col_scale[c] = pow2_inverse(m);
    for (std::size_t r = 0; r < n; ++r) a[r * n + c] *= col_scale[c];
  }
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  const double floor = relative_pivot_floor * scale;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t best = p;
    for (std::size_t r = p + 1; r < n; ++r)
      if (std::abs(a[r * n + p]) > std::abs(a[best * n + p])) best = r;
    if (std::abs(a[best * n + p]) <= floor || a[best * n + p] == 0.0)
      throw SingularMatrix("solve_real: matrix is numerically singular");
    if (best != p) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[p * n + c], a[best * n + c]);
      std::swap(b[p], b[best]);
    }
    for (std::size_t r = p + 1; r < n; ++r) {
      const double f = a[r * n + p] / a[p * n + p];
      if (f == 0.0) continue;
      for (std::size_t c = p; c < n; ++c) a[r * n + c] -= f * a[p * n + c];
      b[r] -= f * b[p];
    }
  }
  for (std::size_t p = n; p-- > 0;) {
    double acc = b[p];
    for (std::size_t c = p + 1; c < n; ++c) acc -= a[p * n + c] * b[c];
    b[p] = acc / a[p * n + p];
  }
  for (std::size_t c = 0; c < n; ++c) b[c] *= col_scale[c];
  return b;
}

// ---------------------------------------------------------------------------
// Hermitian eigenproblems
// ---------------------------------------------------------------------------

struct ComplexHermEig {
  std::vector<double> lambdas;  // descending
  ComplexMatrix vectors;        // columns
};

/// Cyclic Jacobi for a complex Hermitian matrix. Each rotation first removes
/// the phase of the pivot entry, then applies the real symmetric rotation.
inline ComplexHermEig jacobi_eig(ComplexMatrix a, double off_tol_rel = 1e-13, int max_sweeps = 100) {
  if (!a.square()) throw ContractViolation("jacobi_eig: matrix must be square");
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = frobenius_norm(a);
  const double threshold = off_tol_rel * scale;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (sweep++ >= max_sweeps) throw NumericFailure("jacobi_eig: no convergence within the sweep limit");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0 || mag < 1e-300) continue;
        const Complex phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  ComplexHermEig out;
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.lambdas.push_back(a(order[k], order[k]).real());
    out.vectors.set_col(k, v.col(order[k]));
  }
  return out;
}

/// Quaternionic inner product u* v of two column vectors.
inline Quaternion dot(const QMatrix& u, const QMatrix& v) {
  Quaternion s;
  for (std::size_t r = 0; r < u.rows(); ++r) s += conj(u[r]) * v[r];
  return s;
}

/// Eigen-decomposition A = V diag(lambdas) V* of a quaternionic Hermitian
/// matrix. Eigenvalues are real and sorted descending.
struct HermEig {
  std::vector<double> lambdas;
  QMatrix vectors;
};

namespace detail {

/// Fixes the right unit-quaternion phase of an eigenvector: the first
/// component of non-negligible size is made real and positive.
inline void normalize_phase(QMatrix& v) {
  double largest = 0.0;
  for (std::size_t r = 0; r < v.rows(); ++r) largest = std::max(largest, abs(v[r]));
  for (std::size_t r = 0; r < v.rows(); ++r) {
    const double m = abs(v[r]);
    if (m > 1e-8 * largest) {
      const Quaternion phase = conj(v[r]) / m;
      for (std::size_t k = 0; k < v.rows(); ++k) v[k] = v[k] * phase;
      v[r] = Quaternion(m);
      return;
    }
  }
}

/// Orders a before b: larger eigenvalue first; within the tie tolerance the
/// first component whose magnitudes differ decides, larger magnitude first.
inline bool eig_precedes(double la, const QMatrix& va, double lb, const QMatrix& vb, double tie_tol) {
  if (std::abs(la - lb) > tie_tol) return la > lb;
  for (std::size_t r = 0; r < va.rows(); ++r) {
    const double ma = abs(va[r]);
    const double mb = abs(vb[r]);
    if (std::abs(ma - mb) > 1e-12) return ma > mb;
  }
  return false;
}

}  // namespace detail

/// Spectral decomposition of a Hermitian quaternionic matrix through its
/// complex adjoint. Every eigenvalue of the adjoint appears twice; each pair
/// is folded back into one quaternionic eigenvector.
inline HermEig hermitian_eig(const QMatrix& a) {
  if (!a.square()) throw ContractViolation("hermitian_eig: matrix must be square");
  const std::size_t n = a.rows();
  const double scale = max_abs(a);
  if (hermitian_defect(a) > 1e-12 * scale) throw ContractViolation("hermitian_eig: matrix is not Hermitian");
  HermEig out;
  out.vectors = QMatrix(n, n);
  if (n == 0) return out;

  const ComplexHermEig ce = jacobi_eig(embed(hermitian_part(a)));
  const double norm_a = std::max(std::abs(ce.lambdas.front()), std::abs(ce.lambdas.back()));
  const double cluster_tol = 1e-8 * std::max(norm_a, std::numeric_limits<double>::min());

  // A complex eigenvector [p; q] of the adjoint is the first column of the
  // image of the quaternionic vector p - conj(q) j.
  auto fold = [&](std::size_t col) {
    QMatrix v(n, 1);
    for (std::size_t r = 0; r < n; ++r) v[r] = from_complex_pair(ce.vectors(r, col), -std::conj(ce.vectors(n + r, col)));
    return v;
  };
  auto orthogonalize = [](QMatrix v, const std::vector<QMatrix>& basis) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) v -= u * dot(u, v);
    return v;
  };

  std::vector<QMatrix> accepted;
  std::vector<double> values;
  std::size_t start = 0;
  const std::size_t total = 2 * n;
  while (start < total) {
    std::size_t end = start + 1;
    while (end < total && ce.lambdas[end - 1] - ce.lambdas[end] <= cluster_tol) ++end;
    const std::size_t want = (end - start + 1) / 2;
    std::vector<QMatrix> candidates;
    for (std::size_t c = start; c < end; ++c) candidates.push_back(fold(c));
    for (std::size_t taken = 0; taken < want && accepted.size() < n; ++taken) {
      double best_norm = -1.0;
      QMatrix best;
      for (const auto& cand : candidates) {
        QMatrix r = orthogonalize(cand, accepted);
        const double rn = vector_norm(r);
        if (rn > best_norm) {
          best_norm = rn;
          best = std::move(r);
        }
      }
      if (best_norm <= 1e-6) throw NumericFailure("hermitian_eig: failed to pair eigenvectors of the complex adjoint");
      best *= 1.0 / best_norm;
      accepted.push_back(best);
      values.push_back((dot(best, a * best)).real());
    }
    start = end;
  }
  if (accepted.size() != n) throw NumericFailure("hermitian_eig: eigenvalues of the complex adjoint are not paired");

  for (auto& v : accepted) detail::normalize_phase(v);

  // Insertion sort: the tie rule is tolerance based and not a strict weak order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = i;
    while (j > 0 && detail::eig_precedes(values[order[j]], accepted[order[j]], values[order[j - 1]],
                                         accepted[order[j - 1]], cluster_tol)) {
      std::swap(order[j], order[j - 1]);
      --j;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    out.lambdas.push_back(values[order[k]]);
    out.vectors.set_col(k, accepted[order[k]]);
  }
  return out;
}

/// V diag(f(lambda)) V* for a real function f of the spectrum.
template <typename F>
QMatrix spectral_function(const HermEig& e, F&& f) {
  const std::size_t n = e.lambdas.size();
  QMatrix d(n, n);
  for (std::size_t k = 0; k < n; ++k) d(k, k) = Quaternion(f(e.lambdas[k]));
  return hermitian_part(e.vectors * d * adjoint(e.vectors));
}

/// Largest |eigenvalue| of a Hermitian matrix (its spectral norm).
inline double spectral_norm_hermitian(const HermEig& e) {
  double m = 0.0;
  for (double l : e.lambdas) m = std::max(m, std::abs(l));
  return m;
}

// ---------------------------------------------------------------------------
// Rank and kernel
// ---------------------------------------------------------------------------

/// Singular values of A (descending) from the Hermitian dilation
/// [[0, A], [A*, 0]], whose spectrum is {+-sigma_i} plus |m - n| zeros.
/// Avoids squaring the condition number as A*A would.
struct Dilation {
  HermEig eig;
  std::vector<double> singular_values;
};

inline Dilation dilation_eig(const QMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  QMatrix h(m + n, m + n);
  h.set_block(0, m, a);
  h.set_block(m, 0, adjoint(a));
  Dilation d{hermitian_eig(h), {}};
  const std::size_t k = std::min(m, n);
  for (std::size_t i = 0; i < k; ++i) d.singular_values.push_back(std::max(d.eig.lambdas[i], 0.0));
  return d;
}

/// Relative rank tolerance used when none is given: 1e-9 * max(rows, cols).
/// The absolute threshold is this times the largest singular value.
inline double default_rank_tol(const QMatrix& a) {
  return 1e-9 * static_cast<double>(std::max<std::size_t>({a.rows(), a.cols(), std::size_t{1}}));
}

namespace detail {

inline std::size_t count_above(const std::vector<double>& values, double cutoff) {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double s) { return s > cutoff; }));
}

/// Kernel from a dilation whose singular values above `cutoff` are kept.
inline QMatrix kernel_from_dilation(const QMatrix& a, const Dilation& d, double cutoff) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t nullity = n - count_above(d.singular_values, cutoff);
  if (nullity == 0) return QMatrix(n, 0);

  // The bottom halves of the dilation eigenvectors with |lambda| <= cutoff span
  // the right null space; Y Y* is the orthogonal projector onto it.
  std::vector<std::size_t> small;
  for (std::size_t k = 0; k < m + n; ++k)
    if (std::abs(d.eig.lambdas[k]) <= cutoff) small.push_back(k);
  QMatrix y(n, small.size());
  for (std::size_t c = 0; c < small.size(); ++c)
    for (std::size_t r = 0; r < n; ++r) y(r, c) = d.eig.vectors(m + r, small[c]);
  const HermEig proj = hermitian_eig(hermitian_part(y * adjoint(y)));
  return proj.vectors.block(0, 0, n, nullity);
}

}  // namespace detail

/// Numerical rank: singular values above tol * sigma_max.
inline std::size_t rank(const QMatrix& a, double tol) {
  if (!(tol > 0.0)) throw ContractViolation("rank: tolerance must be positive");
  if (a.rows() == 0 || a.cols() == 0) return 0;
  const Dilation d = dilation_eig(a);
  return detail::count_above(d.singular_values, tol * d.singular_values.front());
}

inline std::size_t rank(const QMatrix& a) { return rank(a, default_rank_tol(a)); }

/// Rank with an absolute singular-value cutoff.
inline std::size_t rank_absolute(const QMatrix& a, double cutoff) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  return detail::count_above(dilation_eig(a).singular_values, cutoff);
}

/// Orthonormal basis (n x d) of the right null space of A, d = cols - rank.
/// Singular values at or below tol * sigma_max count as zero.
inline QMatrix kernel(const QMatrix& a, double tol) {
  if (!(tol > 0.0)) throw ContractViolation("kernel: tolerance must be positive");
  if (a.cols() == 0) return QMatrix(0, 0);
  if (a.rows() == 0) return QMatrix::identity(a.cols());
  const Dilation d = dilation_eig(a);
  return detail::kernel_from_dilation(a, d, tol * d.singular_values.front());
}

inline QMatrix kernel(const QMatrix& a) { return kernel(a, default_rank_tol(a)); }

/// Kernel with an absolute singular-value cutoff, for matrices whose natural
/// scale is known from outside (a Gram matrix restricted to a subspace).
inline QMatrix kernel_absolute(const QMatrix& a, double cutoff) {
  if (a.cols() == 0) return QMatrix(0, 0);
  if (a.rows() == 0) return QMatrix::identity(a.cols());
  return detail::kernel_from_dilation(a, dilation_eig(a), cutoff);
}

/// Euclidean-orthonormal basis of the column span of A: modified Gram-Schmidt
/// with one re-orthogonalization pass; columns whose residual falls below
/// drop_tol times the largest column norm are discarded.
inline QMatrix orthonormal_columns(const QMatrix& a, double drop_tol = 1e-10) {
  double largest = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) largest = std::max(largest, vector_norm(a.col(c)));
  std::vector<QMatrix> basis;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    QMatrix v = a.col(c);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) v -= u * dot(u, v);
    const double vn = vector_norm(v);
    if (largest == 0.0 || vn <= drop_tol * largest) continue;
    basis.push_back(v * (1.0 / vn));
  }
  QMatrix out(a.rows(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) out.set_col(c, basis[c]);
  return out;
}

}  // namespace qkrein
