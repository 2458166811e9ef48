#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qkrein/error.hpp"
#include "qkrein/inner_space.hpp"
#include "qkrein/linalg.hpp"

namespace qkrein {

/// Family of semi-norms p_g(v) = sqrt(v* H_g v) with H_g Hermitian PSD.
class SemiNormFamily {
 public:
  explicit SemiNormFamily(std::vector<QMatrix> mats) : mats_(std::move(mats)) {
    for (const auto& h : mats_) {
      if (!h.square()) throw ContractViolation("semi-norm matrix must be square");
      if (!mats_.empty() && h.rows() != mats_.front().rows()) throw ContractViolation("semi-norm matrices differ in size");
      const HermEig e = hermitian_eig(h);
      if (!e.lambdas.empty() && e.lambdas.back() < -1e-12 * spectral_norm_hermitian(e))
        throw ContractViolation("semi-norm matrix is not positive semidefinite");
    }
  }

  std::size_t size() const { return mats_.size(); }
  const QMatrix& operator[](std::size_t i) const { return mats_.at(i); }

 private:
  std::vector<QMatrix> mats_;
};

inline double quadratic_form(const QMatrix& h, const QMatrix& v) { return dot(v, h * v).real(); }

inline double seminorm_eval(const SemiNormFamily& f, std::size_t idx, const QMatrix& v) {
  return std::sqrt(std::max(0.0, quadratic_form(f[idx], v)));
}

/// Minkowski functional of U = { v : max_g p_g(v) < 1 }, closed form:
/// max_g p_g(v).
inline double minkowski(const SemiNormFamily& f, const QMatrix& v) {
  double m = 0.0;
  for (std::size_t g = 0; g < f.size(); ++g) m = std::max(m, seminorm_eval(f, g, v));
  return m;
}

/// Minkowski functional by bisection on the membership predicate v / a in U,
/// computing inf{ a > 0 : v / a in U } without using homogeneity.
inline double minkowski_bisection(const SemiNormFamily& f, const QMatrix& v, int max_steps = 400) {
  auto absorbed = [&](double a) {
    const QMatrix scaled = v * (1.0 / a);
    for (std::size_t g = 0; g < f.size(); ++g)
      if (!(seminorm_eval(f, g, scaled) < 1.0)) return false;
    return true;
  };
  double lo = 0.0;
  double hi = 1.0;
  int steps = 0;
  while (!absorbed(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++steps > 2000) throw NumericFailure("minkowski_bisection: set is not absorbing");
  }
  for (int i = 0; i < max_steps && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (absorbed(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// p_w(v) = |[v, w]|.
inline double weak_seminorm(const InnerProductSpace& s, const QMatrix& w, const QMatrix& v) {
  return abs(inner(s, v, w));
}

/// Norm ||v||^2 = v* H v with H Hermitian positive definite.
class NormQ {
 public:
  explicit NormQ(QMatrix h) : h_(hermitian_part(h)) {
    const HermEig e = hermitian_eig(h_);
    if (e.lambdas.empty() || !(e.lambdas.back() > 0.0)) throw ContractViolation("norm matrix is not positive definite");
  }

  const QMatrix& matrix() const { return h_; }
  double operator()(const QMatrix& v) const { return std::sqrt(std::max(0.0, quadratic_form(h_, v))); }

 private:
  QMatrix h_;
};

/// Polar of a quadratic norm: ||v||' = sup_{||w|| <= 1} |[v, w]| has matrix
/// M H^{-1} M. For degenerate M this is only a semi-norm.
struct PolarResult {
  QMatrix matrix;
  bool is_norm = true;  // false when M is singular
};

inline PolarResult polar(const InnerProductSpace& s, const QMatrix& h) {
  if (h.rows() != s.dim()) throw ContractViolation("polar: norm and space differ in dimension");
  const QMatrix hinv_m = solve(h, s.gram());  // throws SingularMatrix for singular H
  return {hermitian_part(s.gram() * hinv_m), s.nondegenerate()};
}

inline NormQ polar(const InnerProductSpace& s, const NormQ& n) {
  PolarResult p = polar(s, n.matrix());
  if (!p.is_norm) throw SingularMatrix("polar: degenerate inner product gives only a semi-norm");
  return NormQ(std::move(p.matrix));
}

struct SelfPolarResult {
  QMatrix hinf;
  std::size_t iterations = 0;
  /// ||H_{n+1} - H_n||_F per step.
  std::vector<double> history;
  /// H_0, H_1, ..., H_final.
  std::vector<QMatrix> iterates;
};

inline constexpr double kSelfPolarTol = 1e-12;
inline constexpr std::size_t kSelfPolarMaxIter = 200;

/// Thrown when the self-polar iteration runs out of steps; carries the
/// iterates computed so far.
class SelfPolarFailure : public NumericFailure {
 public:
  SelfPolarFailure(const std::string& what, SelfPolarResult partial)
      : NumericFailure(what), partial_(std::move(partial)) {}
  const SelfPolarResult& partial() const { return partial_; }

 private:
  SelfPolarResult partial_;
};

/// Averaging a norm with its polar, H <- (H + M H^{-1} M) / 2, starting from
/// ||M||_2 I so that |[u,v]| <= ||u|| ||v|| holds from the first step. The
/// limit is the self-polar norm, whose matrix is |M|.
inline SelfPolarResult self_polar(const InnerProductSpace& s, double tol = kSelfPolarTol,
                                  std::size_t max_iter = kSelfPolarMaxIter) {
  if (!(tol > 0.0)) throw ContractViolation("self_polar: tolerance must be positive");
  if (!s.nondegenerate()) throw SingularMatrix("self_polar: Gram matrix is singular");
  const QMatrix& m = s.gram();
  SelfPolarResult r;
  QMatrix h = QMatrix::identity(s.dim()) * s.scale();
  r.iterates.push_back(h);
  while (r.iterations < max_iter) {
    QMatrix next = hermitian_part(0.5 * (h + m * solve(h, m)));
    const double step = frobenius_norm(next - h);
    const double size = frobenius_norm(h);
    r.history.push_back(step);
    r.iterates.push_back(next);
    ++r.iterations;
    h = std::move(next);
    if (step <= tol * size) {
      r.hinf = h;
      return r;
    }
  }
  r.hinf = h;
  throw SelfPolarFailure("self_polar: iteration limit reached", std::move(r));
}

/// Gram operator G = H^{-1} M, so that [v, w] = <v, G w>_H.
inline QMatrix gram_operator(const InnerProductSpace& s, const NormQ& n) {
  if (n.matrix().rows() != s.dim()) throw ContractViolation("gram_operator: dimension mismatch");
  return solve(n.matrix(), s.gram());
}

/// v -> ||G v||_H.
inline double mackey_seminorm(const InnerProductSpace& s, const NormQ& n, const QMatrix& v) {
  check_vector(s, v);
  return n(gram_operator(s, n) * v);
}

}  // namespace qkrein
