#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "qkrein/error.hpp"
#include "qkrein/linalg.hpp"
#include "qkrein/qmatrix.hpp"

namespace qkrein {

/// Relative tolerance for neutrality and degeneracy decisions: a value is
/// treated as zero when it is at most this times the spectral norm of the
/// Gram matrix.
inline constexpr double kNeutralityTol = 1e-9;

/// Quaternionic right vector space H^n with an indefinite inner product
/// given by a Hermitian Gram matrix M:
///
///     [v, w] = w* M v,
///
/// right-linear in v and conjugate-right-linear in w.
class InnerProductSpace {
 public:
  InnerProductSpace() = default;
  explicit InnerProductSpace(QMatrix gram) : gram_(std::move(gram)) {
    if (!gram_.square()) throw ContractViolation("Gram matrix must be square");
    if (hermitian_defect(gram_) > 1e-12 * max_abs(gram_)) throw ContractViolation("Gram matrix must be Hermitian");
    gram_ = hermitian_part(gram_);
    eig_ = hermitian_eig(gram_);
    scale_ = spectral_norm_hermitian(eig_);
  }

  std::size_t dim() const { return gram_.rows(); }
  const QMatrix& gram() const { return gram_; }
  const HermEig& gram_eig() const { return eig_; }
  /// Spectral norm of M.
  double scale() const { return scale_; }
  /// Absolute threshold below which |[v,v]| / |v|^2 or |lambda| counts as zero.
  double zero_threshold() const { return kNeutralityTol * scale_; }

  /// Number of eigenvalues of M inside the zero band.
  std::size_t nullity() const {
    std::size_t n0 = 0;
    for (double l : eig_.lambdas)
      if (std::abs(l) <= zero_threshold()) ++n0;
    return n0;
  }
  bool nondegenerate() const { return nullity() == 0; }

 private:
  QMatrix gram_;
  HermEig eig_;
  double scale_ = 0.0;
};

inline void check_vector(const InnerProductSpace& s, const QMatrix& v) {
  if (v.cols() != 1 || v.rows() != s.dim()) throw ContractViolation("vector dimension does not match the space");
}

/// [v, w] = w* M v.
inline Quaternion inner(const InnerProductSpace& s, const QMatrix& v, const QMatrix& w) {
  check_vector(s, v);
  check_vector(s, w);
  return (adjoint(w) * s.gram() * v)(0, 0);
}

enum class VectorSign { positive, negative, neutral };

inline std::string_view to_string(VectorSign s) {
  switch (s) {
    case VectorSign::positive: return "positive";
    case VectorSign::negative: return "negative";
    case VectorSign::neutral: return "neutral";
  }
  return "?";
}

struct VectorClass {
  VectorSign tag;
  double value;  // [v, v]
};

inline VectorClass classify_vector(const InnerProductSpace& s, const QMatrix& v) {
  const double value = inner(s, v, v).real();
  const double band = s.zero_threshold() * vector_norm2(v);
  if (std::abs(value) <= band) return {VectorSign::neutral, value};
  return {value > 0 ? VectorSign::positive : VectorSign::negative, value};
}

/// Basis of V^0 = ker M, the vectors orthogonal to the whole space.
inline QMatrix isotropic_part(const InnerProductSpace& s) {
  const std::size_t n = s.dim();
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(s.gram_eig().lambdas[k]) <= s.zero_threshold()) cols.push_back(k);
  QMatrix basis(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) basis.set_col(c, s.gram_eig().vectors.col(cols[c]));
  return basis;
}

/// V = V+ [+] V- [+] N together with its fundamental symmetry J.
///
/// J is +1 on V+ and on N, -1 on V-. The J-inner product is only defined for
/// nondegenerate spaces; see j_inner.
struct FundamentalDecomposition {
  QMatrix vplus;
  QMatrix vminus;
  QMatrix neutral;
  QMatrix j;
  std::vector<double> lambdas;

  std::array<std::size_t, 3> signature() const { return {vplus.cols(), vminus.cols(), neutral.cols()}; }
};

/// Spectral fundamental decomposition: eigenvectors of M grouped by the sign
/// of their eigenvalue.
inline FundamentalDecomposition fundamental_decomposition(const InnerProductSpace& s) {
  const std::size_t n = s.dim();
  const HermEig& e = s.gram_eig();
  const double band = s.zero_threshold();
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t k = 0; k < n; ++k) {
    if (e.lambdas[k] > band)
      pos.push_back(k);
    else if (e.lambdas[k] < -band)
      neg.push_back(k);
    else
      zero.push_back(k);
  }
  auto gather = [&](const std::vector<std::size_t>& idx) {
    QMatrix b(n, idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) b.set_col(c, e.vectors.col(idx[c]));
    return b;
  };
  FundamentalDecomposition d;
  d.vplus = gather(pos);
  d.vminus = gather(neg);
  d.neutral = gather(zero);
  d.lambdas = e.lambdas;
  d.j = spectral_function(e, [band](double l) { return l < -band ? -1.0 : 1.0; });
  return d;
}

inline void require_nondegenerate(const InnerProductSpace& s, const char* what) {
  if (!s.nondegenerate()) throw ContractViolation(std::string(what) + ": the inner product space is degenerate");
}

/// <v, w>_J = [Jv, w], a positive definite inner product on a nondegenerate
/// space.
inline Quaternion j_inner(const InnerProductSpace& s, const FundamentalDecomposition& d, const QMatrix& v,
                          const QMatrix& w) {
  require_nondegenerate(s, "j_inner");
  return inner(s, d.j * v, w);
}

inline double j_norm(const InnerProductSpace& s, const FundamentalDecomposition& d, const QMatrix& v) {
  return std::sqrt(std::max(0.0, j_inner(s, d, v, v).real()));
}

/// Gram matrix of the J-inner product, M J. For the spectral decomposition
/// this is |M| = V |Lambda| V*.
inline QMatrix j_gram(const InnerProductSpace& s, const FundamentalDecomposition& d) {
  return hermitian_part(s.gram() * d.j);
}

/// |M| from the spectral decomposition of the Gram matrix.
inline QMatrix abs_gram(const InnerProductSpace& s) {
  return spectral_function(s.gram_eig(), [](double l) { return std::abs(l); });
}

}  // namespace qkrein
