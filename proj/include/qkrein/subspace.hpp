#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "qkrein/error.hpp"
#include "qkrein/inner_space.hpp"
#include "qkrein/linalg.hpp"

namespace qkrein {

/// Right-linear subspace of an inner product space, held as a
/// Euclidean-orthonormal n x k basis. Dependent spanning columns are dropped
/// on construction.
class Subspace {
 public:
  Subspace(std::shared_ptr<const InnerProductSpace> ambient, const QMatrix& spanning)
      : ambient_(std::move(ambient)) {
    if (!ambient_) throw ContractViolation("subspace needs an ambient space");
    if (spanning.rows() != ambient_->dim()) throw ContractViolation("subspace basis has the wrong row count");
    basis_ = orthonormal_columns(spanning);
  }
  Subspace(const InnerProductSpace& ambient, const QMatrix& spanning)
      : Subspace(std::make_shared<const InnerProductSpace>(ambient), spanning) {}

  const QMatrix& basis() const { return basis_; }
  std::size_t dim() const { return basis_.cols(); }
  const InnerProductSpace& ambient() const { return *ambient_; }
  const std::shared_ptr<const InnerProductSpace>& ambient_ptr() const { return ambient_; }

  /// Same ambient space, different span.
  Subspace with_span(const QMatrix& spanning) const { return Subspace(ambient_, spanning); }

 private:
  std::shared_ptr<const InnerProductSpace> ambient_;
  QMatrix basis_;
};

/// Absolute cutoff for singular values and eigenvalues of Gram products
/// B* M (...) with orthonormal B; all such products are bounded by ||M||.
inline double gram_cutoff(const InnerProductSpace& s) { return s.zero_threshold(); }

/// G_L = B* M B, the inner product restricted to L in basis coordinates.
inline QMatrix restricted_gram(const Subspace& l) {
  const QMatrix& b = l.basis();
  return hermitian_part(adjoint(b) * l.ambient().gram() * b);
}

/// True when every column of `inner` lies in span(outer).
inline bool contains(const QMatrix& outer, const QMatrix& inner_basis) {
  if (inner_basis.cols() == 0) return true;
  if (outer.cols() == 0) return rank(inner_basis) == 0;
  return rank(hcat(outer, inner_basis)) == rank(outer);
}

inline bool same_span(const QMatrix& a, const QMatrix& b) { return contains(a, b) && contains(b, a); }

/// L^[perp] = { v : [v, w] = 0 for all w in L } = ker(B* M).
inline Subspace orthogonal_companion(const Subspace& l) {
  const InnerProductSpace& s = l.ambient();
  const QMatrix bm = adjoint(l.basis()) * s.gram();
  return l.with_span(kernel_absolute(bm, gram_cutoff(s)));
}

/// Orthonormal basis of span(a) cap span(b).
inline QMatrix intersection(const QMatrix& a, const QMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() == 0 || b.cols() == 0) return QMatrix(n, 0);
  const QMatrix k = kernel(hcat(a, -b));
  return orthonormal_columns(a * k.block(0, 0, a.cols(), k.cols()));
}

struct OrthoCertificate {
  bool ortho_complemented = false;
  std::size_t span_rank = 0;       // rank [B | K]
  std::size_t ambient_dim = 0;
  std::size_t companion_dim = 0;
  /// Present for a nondegenerate ambient: G_L is nonsingular.
  std::optional<bool> restricted_gram_nonsingular;
};

inline bool restricted_gram_is_nonsingular(const Subspace& l) {
  if (l.dim() == 0) return true;
  const HermEig e = hermitian_eig(restricted_gram(l));
  const double cut = gram_cutoff(l.ambient());
  for (double v : e.lambdas)
    if (std::abs(v) <= cut) return false;
  return true;
}

/// L is ortho-complemented when L and L^[perp] together span the space.
inline OrthoCertificate is_ortho_complemented(const Subspace& l) {
  const Subspace k = orthogonal_companion(l);
  OrthoCertificate cert;
  cert.ambient_dim = l.ambient().dim();
  cert.companion_dim = k.dim();
  const QMatrix joined = hcat(l.basis(), k.basis());
  cert.span_rank = joined.cols() == 0 ? 0 : rank(joined);
  cert.ortho_complemented = cert.span_rank == cert.ambient_dim;
  if (l.ambient().nondegenerate()) cert.restricted_gram_nonsingular = restricted_gram_is_nonsingular(l);
  return cert;
}

/// Isotropic part L^0 = L cap L^[perp].
inline Subspace isotropic_part(const Subspace& l) {
  return l.with_span(intersection(l.basis(), orthogonal_companion(l).basis()));
}

/// The two conditions characterising ortho-complemented subspaces of a
/// possibly degenerate space: (a) L^0 lies in V^0, (b) the image of L in the
/// nondegenerate quotient V / V^0 is ortho-complemented there.
struct KansasResult {
  bool isotropic_in_kernel = false;
  bool quotient_ortho_complemented = false;
  bool holds() const { return isotropic_in_kernel && quotient_ortho_complemented; }
};

/// V / V^0 represented on the Euclidean complement of ker M. Returns the
/// coordinate map W (n x r, orthonormal columns spanning ran M).
inline QMatrix quotient_coordinates(const InnerProductSpace& s) {
  const HermEig& e = s.gram_eig();
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < s.dim(); ++k)
    if (std::abs(e.lambdas[k]) > s.zero_threshold()) keep.push_back(k);
  QMatrix w(s.dim(), keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) w.set_col(c, e.vectors.col(keep[c]));
  return w;
}

inline KansasResult kansas_check(const Subspace& l) {
  const InnerProductSpace& s = l.ambient();
  KansasResult out;

  const QMatrix l0 = isotropic_part(l).basis();
  const QMatrix v0 = qkrein::isotropic_part(s);
  out.isotropic_in_kernel = contains(v0, l0);

  const QMatrix w = quotient_coordinates(s);
  if (w.cols() == 0) {
    out.quotient_ortho_complemented = true;
  } else {
    auto quotient = std::make_shared<const InnerProductSpace>(hermitian_part(adjoint(w) * s.gram() * w));
    const Subspace image(quotient, adjoint(w) * l.basis());
    out.quotient_ortho_complemented = is_ortho_complemented(image).ortho_complemented;
  }
  return out;
}

enum class SubspaceTag { strictly_positive, positive, neutral, negative, strictly_negative, indefinite };

inline std::string_view to_string(SubspaceTag t) {
  switch (t) {
    case SubspaceTag::strictly_positive: return "strictly-positive";
    case SubspaceTag::positive: return "positive";
    case SubspaceTag::neutral: return "neutral";
    case SubspaceTag::negative: return "negative";
    case SubspaceTag::strictly_negative: return "strictly-negative";
    case SubspaceTag::indefinite: return "indefinite";
  }
  return "?";
}

struct SubspaceReport {
  SubspaceTag tag = SubspaceTag::neutral;
  bool degenerate = false;
  /// c with |[v,v]| >= c ||v||_J^2 on L; only for strictly definite L in a
  /// nondegenerate ambient space.
  std::optional<double> uniform_constant;
  std::vector<double> gram_spectrum;
};

/// Sign classification of L from the spectrum of G_L, plus the uniform
/// definiteness constant: the extreme generalized eigenvalue of
/// (G_L, B* |M| B).
inline SubspaceReport classify_subspace(const Subspace& l) {
  SubspaceReport rep;
  const std::size_t k = l.dim();
  if (k == 0) return rep;

  const InnerProductSpace& s = l.ambient();
  const QMatrix g = restricted_gram(l);
  rep.gram_spectrum = hermitian_eig(g).lambdas;
  const double cut = gram_cutoff(s);
  std::size_t npos = 0, nneg = 0;
  for (double v : rep.gram_spectrum) {
    if (v > cut) ++npos;
    if (v < -cut) ++nneg;
  }
  const std::size_t nzero = k - npos - nneg;
  rep.degenerate = nzero > 0;
  if (npos > 0 && nneg > 0)
    rep.tag = SubspaceTag::indefinite;
  else if (npos == k)
    rep.tag = SubspaceTag::strictly_positive;
  else if (nneg == k)
    rep.tag = SubspaceTag::strictly_negative;
  else if (nzero == k)
    rep.tag = SubspaceTag::neutral;
  else
    rep.tag = npos > 0 ? SubspaceTag::positive : SubspaceTag::negative;

  const bool strict = rep.tag == SubspaceTag::strictly_positive || rep.tag == SubspaceTag::strictly_negative;
  if (strict && s.nondegenerate()) {
    const QMatrix& b = l.basis();
    const HermEig jg = hermitian_eig(hermitian_part(adjoint(b) * abs_gram(s) * b));
    const QMatrix inv_sqrt = spectral_function(jg, [](double v) { return 1.0 / std::sqrt(v); });
    const HermEig gen = hermitian_eig(hermitian_part(inv_sqrt * g * inv_sqrt));
    const double c = rep.tag == SubspaceTag::strictly_positive ? gen.lambdas.back() : -gen.lambdas.front();
    if (c > 0.0) rep.uniform_constant = c;
  }
  return rep;
}

/// [.,.]-orthogonal projection of v onto L: w in L with [v - w, u] = 0 for
/// all u in L. Absent when G_L x = B* M v is inconsistent.
inline std::optional<QMatrix> project(const Subspace& l, const QMatrix& v) {
  const InnerProductSpace& s = l.ambient();
  check_vector(s, v);
  const QMatrix& b = l.basis();
  if (l.dim() == 0) return QMatrix(s.dim(), 1);
  const QMatrix g = restricted_gram(l);
  const QMatrix rhs = adjoint(b) * s.gram() * v;
  const HermEig e = hermitian_eig(g);
  const double cut = gram_cutoff(s);

  QMatrix x(l.dim(), 1);
  for (std::size_t i = 0; i < e.lambdas.size(); ++i) {
    if (std::abs(e.lambdas[i]) <= cut) continue;
    const QMatrix u = e.vectors.col(i);
    x += u * (dot(u, rhs) / e.lambdas[i]);
  }
  const double residual = vector_norm(g * x - rhs);
  // ||M|| ||v|| bounds the rounding error in rhs, which is all of rhs when
  // L lies in ker M.
  const double allowed =
      1e-9 * (spectral_norm_hermitian(e) * vector_norm(x) + vector_norm(rhs) + s.scale() * vector_norm(v));
  if (residual > allowed) return std::nullopt;
  return b * x;
}

}  // namespace qkrein
