#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkrein/error.hpp"
#include "qkrein/inner_space.hpp"
#include "qkrein/linalg.hpp"
#include "qkrein/subspace.hpp"

namespace qkrein {

// ---------------------------------------------------------------------------
// Krein spaces
// ---------------------------------------------------------------------------

struct KreinReport {
  bool is_krein = false;
  std::array<std::size_t, 3> signature{};
  /// Dimension of the negative component.
  std::size_t pontryagin_index = 0;
  /// Smallest |eigenvalue| of M, the margin of bounded invertibility.
  double gram_min_eigen_magnitude = 0.0;
  /// |M|, the matrix of the natural norm of the spectral decomposition.
  QMatrix natural_norm;
};

/// A finite-dimensional inner product space is Krein exactly when its Gram
/// matrix is invertible; eigenvalues within kNeutralityTol * ||M|| of zero
/// count as zero.
inline KreinReport verify_krein(const InnerProductSpace& s) {
  const FundamentalDecomposition d = fundamental_decomposition(s);
  KreinReport r;
  r.signature = d.signature();
  r.pontryagin_index = r.signature[1];
  r.is_krein = r.signature[2] == 0;
  double margin = s.dim() == 0 ? 0.0 : std::abs(d.lambdas.front());
  for (double l : d.lambdas) margin = std::min(margin, std::abs(l));
  r.gram_min_eigen_magnitude = margin;
  r.natural_norm = abs_gram(s);
  return r;
}

/// Fundamental decomposition with the given M-orthogonal positive and
/// negative bases (columns together spanning the space). J is
/// T diag(I, -I) T^{-1} with T = [V+ | V-].
inline FundamentalDecomposition decomposition_from_bases(const InnerProductSpace& s, const QMatrix& vplus,
                                                         const QMatrix& vminus) {
  if (!s.nondegenerate()) throw ContractViolation("decomposition_from_bases: space is not Krein");
  const QMatrix t = hcat(vplus, vminus);
  if (t.rows() != s.dim() || t.cols() != s.dim()) throw ContractViolation("decomposition_from_bases: bases do not fill the space");
  std::vector<Quaternion> signs(s.dim(), Quaternion(1.0));
  for (std::size_t k = vplus.cols(); k < s.dim(); ++k) signs[k] = Quaternion(-1.0);
  // J = T S T^{-1}  <=>  J^* = T^{-*} S T^*; solve T^* J^* = S T^*.
  const QMatrix jt = solve(adjoint(t), QMatrix::diagonal(signs) * adjoint(t));
  FundamentalDecomposition d;
  d.vplus = vplus;
  d.vminus = vminus;
  d.neutral = QMatrix(s.dim(), 0);
  d.j = adjoint(jt);
  d.lambdas = s.gram_eig().lambdas;
  return d;
}

/// Hyperbolic rotation by parameter t in the plane of the leading positive
/// and leading negative spectral directions (each scaled to [u,u] = +-1):
///   u+' = u+ cosh t + u- sinh t,   u-' = u+ sinh t + u- cosh t.
/// Returns `d` unchanged when either component is empty.
inline FundamentalDecomposition hyperbolic_rotation(const InnerProductSpace& s, const FundamentalDecomposition& d,
                                                    double t) {
  if (d.vplus.cols() == 0 || d.vminus.cols() == 0) return d;
  QMatrix up = d.vplus.col(0);
  QMatrix um = d.vminus.col(0);
  up *= 1.0 / std::sqrt(inner(s, up, up).real());
  um *= 1.0 / std::sqrt(-inner(s, um, um).real());
  QMatrix vplus = d.vplus;
  QMatrix vminus = d.vminus;
  vplus.set_col(0, up * std::cosh(t) + um * std::sinh(t));
  vminus.set_col(0, up * std::sinh(t) + um * std::cosh(t));
  return decomposition_from_bases(s, vplus, vminus);
}

/// Constants with c_low ||v||_{J1} <= ||v||_{J2} <= c_high ||v||_{J1}.
inline std::pair<double, double> natural_norm_equivalence(const InnerProductSpace& s,
                                                          const FundamentalDecomposition& d1,
                                                          const FundamentalDecomposition& d2) {
  if (!s.nondegenerate()) throw ContractViolation("natural_norm_equivalence: space is not Krein");
  const HermEig g1 = hermitian_eig(j_gram(s, d1));
  const QMatrix inv_sqrt = spectral_function(g1, [](double v) { return 1.0 / std::sqrt(v); });
  const HermEig rel = hermitian_eig(hermitian_part(inv_sqrt * j_gram(s, d2) * inv_sqrt));
  return {std::sqrt(rel.lambdas.back()), std::sqrt(rel.lambdas.front())};
}

// ---------------------------------------------------------------------------
// Stein equation  P - A* P A = C* C - N* N
// ---------------------------------------------------------------------------

struct SteinProblem {
  QMatrix a;  // x by x
  QMatrix c;  // y by x
  QMatrix n;  // u by x

  std::size_t x_dim() const { return a.rows(); }
  std::size_t y_dim() const { return c.rows(); }
  std::size_t u_dim() const { return n.rows(); }

  void validate() const {
    if (!a.square()) throw ContractViolation("Stein problem: A must be square");
    if (c.cols() != a.rows() || n.cols() != a.rows())
      throw ContractViolation("Stein problem: C and N must have as many columns as A");
  }

  /// (C* N*) diag(I, -I) (C; N).
  QMatrix rhs() const { return hermitian_part(adjoint(c) * c - adjoint(n) * n); }
};

/// Solves X - A* X A = Q in the real coordinates of X (4 x^2 unknowns).
inline QMatrix solve_stein_equation(const QMatrix& a, const QMatrix& q) {
  const std::size_t x = a.rows();
  const std::size_t dim = 4 * x * x;
  const QMatrix a_adj = adjoint(a);
  std::vector<double> sys(dim * dim);
  std::vector<double> rhs(dim);
  auto coord = [x](std::size_t r, std::size_t c, int comp) { return 4 * (r * x + c) + static_cast<std::size_t>(comp); };
  auto component = [](const Quaternion& qv, int comp) {
    switch (comp) {
      case 0: return qv.w;
      case 1: return qv.x;
      case 2: return qv.y;
      default: return qv.z;
    }
  };
  const Quaternion units[4] = {Quaternion(1.0), Quaternion::i(), Quaternion::j(), Quaternion::k()};
  for (std::size_t r = 0; r < x; ++r)
    for (std::size_t c = 0; c < x; ++c)
      for (int comp = 0; comp < 4; ++comp) {
        QMatrix e(x, x);
        e(r, c) = units[comp];
        const QMatrix image = e - a_adj * e * a;
        const std::size_t col = coord(r, c, comp);
        for (std::size_t rr = 0; rr < x; ++rr)
          for (std::size_t cc = 0; cc < x; ++cc)
            for (int k = 0; k < 4; ++k) sys[coord(rr, cc, k) * dim + col] = component(image(rr, cc), k);
      }
  for (std::size_t r = 0; r < x; ++r)
    for (std::size_t c = 0; c < x; ++c)
      for (int k = 0; k < 4; ++k) rhs[coord(r, c, k)] = component(q(r, c), k);
  const std::vector<double> sol =
      solve_real(std::move(sys), std::move(rhs), 1e3 * std::numeric_limits<double>::epsilon());
  QMatrix p(x, x);
  for (std::size_t r = 0; r < x; ++r)
    for (std::size_t c = 0; c < x; ++c)
      p(r, c) = Quaternion(sol[coord(r, c, 0)], sol[coord(r, c, 1)], sol[coord(r, c, 2)], sol[coord(r, c, 3)]);
  return p;
}

/// True when every eigenvalue of the complex adjoint of A has modulus below
/// `radius`. Uses the Lyapunov criterion: rho(B) < 1 iff X - B* X B = I has
/// a positive definite solution, applied to B = A / radius.
inline bool spectral_radius_below(const QMatrix& a, double radius) {
  if (!a.square()) throw ContractViolation("spectral_radius_below: matrix must be square");
  if (a.rows() == 0) return true;
  QMatrix x;
  try {
    x = solve_stein_equation(a * (1.0 / radius), QMatrix::identity(a.rows()));
  } catch (const SingularMatrix&) {
    return false;
  }
  const HermEig e = hermitian_eig(hermitian_part(x));
  return e.lambdas.back() > 0.0;
}

inline constexpr double kStabilityMargin = 1e-10;
inline constexpr double kSteinTol = 1e-12;
inline constexpr std::size_t kSteinMaxTerms = 1000000;

inline void require_stable(const QMatrix& a) {
  if (!spectral_radius_below(a, 1.0 - kStabilityMargin))
    throw NumericFailure("Stein series diverges: spectral radius of A is not below 1");
}

/// P = sum_k A*^k Q A^k, truncated once a term is at most
/// tol * (1 + ||partial sum||) in Frobenius norm.
inline QMatrix stein_solve_series(const SteinProblem& prob, double tol = kSteinTol,
                                  std::size_t max_terms = kSteinMaxTerms) {
  prob.validate();
  if (!(tol > 0.0)) throw ContractViolation("stein_solve_series: tolerance must be positive");
  require_stable(prob.a);
  const QMatrix a_adj = adjoint(prob.a);
  QMatrix term = prob.rhs();
  QMatrix sum = term;
  for (std::size_t k = 1; k < max_terms; ++k) {
    term = hermitian_part(a_adj * term * prob.a);
    sum += term;
    if (frobenius_norm(term) <= tol * (1.0 + frobenius_norm(sum))) return hermitian_part(sum);
  }
  throw NumericFailure("stein_solve_series: term limit reached");
}

inline QMatrix stein_solve_direct(const SteinProblem& prob) {
  prob.validate();
  return hermitian_part(solve_stein_equation(prob.a, prob.rhs()));
}

// ---------------------------------------------------------------------------
// Interpolation scaffold  K = X + Y + U  with metric diag(P, I_Y, -I_U)
// ---------------------------------------------------------------------------

/// Raised when the Stein solution is not positive definite; carries its
/// eigenvalues.
class ScaffoldRefused : public NumericFailure {
 public:
  ScaffoldRefused(const std::string& what, std::vector<double> eigenvalues)
      : NumericFailure(what), eigenvalues_(std::move(eigenvalues)) {}
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  std::vector<double> eigenvalues_;
};

struct Scaffold {
  SteinProblem problem;
  QMatrix p;
  QMatrix jtilde;
  std::shared_ptr<const InnerProductSpace> space;
  QMatrix stacked;  // [A; C; N]
  Subspace k0;

  std::size_t dim() const { return jtilde.rows(); }
};

inline Scaffold build_scaffold(const SteinProblem& prob, const QMatrix& p) {
  prob.validate();
  if (!p.square() || p.rows() != prob.x_dim()) throw ContractViolation("build_scaffold: P has the wrong shape");
  const HermEig pe = hermitian_eig(hermitian_part(p));
  const double scale = spectral_norm_hermitian(pe);
  if (prob.x_dim() > 0 && !(pe.lambdas.back() > kNeutralityTol * scale))
    throw ScaffoldRefused("build_scaffold: Stein solution is not positive definite", pe.lambdas);

  std::vector<Quaternion> signs(prob.y_dim() + prob.u_dim(), Quaternion(1.0));
  for (std::size_t k = prob.y_dim(); k < signs.size(); ++k) signs[k] = Quaternion(-1.0);
  QMatrix jtilde = block_diag(hermitian_part(p), QMatrix::diagonal(signs));
  auto space = std::make_shared<const InnerProductSpace>(jtilde);
  QMatrix stacked = vcat(vcat(prob.a, prob.c), prob.n);
  Subspace k0(space, stacked);
  return Scaffold{prob, hermitian_part(p), std::move(jtilde), std::move(space), std::move(stacked), std::move(k0)};
}

struct SofsofReport {
  /// ||S* J~ S - P|| / ||P|| with S = [A; C; N].
  double stein_identity_error = 0.0;
  bool stein_identity_ok = false;
  SubspaceReport k0_class;
  bool uniformly_positive = false;
  OrthoCertificate ortho;
  QMatrix companion_gram;
  KreinReport companion_krein;
  bool all_passed() const { return stein_identity_ok && uniformly_positive && ortho.ortho_complemented && companion_krein.is_krein; }
};

inline constexpr double kSteinIdentityTol = 1e-8;

/// Checks that K0 = ran [A; C; N] is uniformly positive and ortho-complemented
/// in the scaffold, and that its companion is a Krein space.
inline SofsofReport verify_sofsof(const Scaffold& sc) {
  SofsofReport r;
  const QMatrix restricted = hermitian_part(adjoint(sc.stacked) * sc.jtilde * sc.stacked);
  const double p_norm = frobenius_norm(sc.p);
  r.stein_identity_error = frobenius_norm(restricted - sc.p) / (p_norm > 0.0 ? p_norm : 1.0);
  r.stein_identity_ok = r.stein_identity_error <= kSteinIdentityTol;

  r.k0_class = classify_subspace(sc.k0);
  r.uniformly_positive = r.k0_class.tag == SubspaceTag::strictly_positive && r.k0_class.uniform_constant.has_value() &&
                         *r.k0_class.uniform_constant > 0.0;
  r.ortho = is_ortho_complemented(sc.k0);

  const Subspace companion = orthogonal_companion(sc.k0);
  r.companion_gram = restricted_gram(companion);
  r.companion_krein = verify_krein(InnerProductSpace(r.companion_gram));
  return r;
}

}  // namespace qkrein
