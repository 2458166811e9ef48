// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "cli_cases.hpp"
#include "test_util.hpp"

using namespace qkrein;
using testing::Rng;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

QMatrix abs_of(const testing::GramCase& g) {
  std::vector<Quaternion> d;
  for (double l : g.lambdas) d.emplace_back(std::abs(l));
  return hermitian_part(g.u * QMatrix::diagonal(d) * adjoint(g.u));
}

testing::GramCase random_invertible_gram(Rng& rng, std::size_t n) {
  const std::size_t np = std::uniform_int_distribution<std::size_t>(0, n)(rng);
  return testing::random_gram_case(rng, np, n - np, 0);
}

QMatrix random_pd(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  std::vector<double> l(n);
  for (double& x : l) x = u(rng);
  return testing::hermitian_with_spectrum(rng, l);
}

Outcome embedding_homomorphism() {
  Rng rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + t % 5, k = 1 + (t / 5) % 5, n = 1 + (t / 25) % 4;
    const QMatrix a = testing::random_matrix(rng, m, k);
    const QMatrix b = testing::random_matrix(rng, k, n);
    const ComplexMatrix ea = embed(a), eb = embed(b);
    const double err = frobenius_norm(embed(a * b) - ea * eb) / (frobenius_norm(ea) * frobenius_norm(eb));
    worst = std::max(worst, err);
  }
  return {worst <= 1e-12, fmt("max relative error %.2e (limit 1e-12)", worst)};
}

Outcome spectral_theorem() {
  Rng rng(1002);
  double recon = 0.0, unit = 0.0, pairing = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 8;
    QMatrix a;
    if (t % 3 == 0) {
      // Repeated eigenvalues.
      std::vector<double> l(n);
      for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<double>(i / 2) - 1.0;
      a = testing::hermitian_with_spectrum(rng, l);
    } else {
      a = testing::random_hermitian(rng, n);
    }
    const double an = frobenius_norm(a);
    const HermEig e = hermitian_eig(a);
    std::vector<Quaternion> d(e.lambdas.begin(), e.lambdas.end());
    recon = std::max(recon, frobenius_norm(a - e.vectors * QMatrix::diagonal(d) * adjoint(e.vectors)) / an);
    unit = std::max(unit, frobenius_norm(adjoint(e.vectors) * e.vectors - QMatrix::identity(n)));
    // Embedded spectrum: each eigenvalue twice, matching the quaternion one.
    const ComplexHermEig ce = jacobi_eig(embed(a));
    for (std::size_t i = 0; i < n; ++i) {
      pairing = std::max(pairing, std::abs(ce.lambdas[2 * i] - ce.lambdas[2 * i + 1]) / an);
      pairing = std::max(pairing, std::abs(ce.lambdas[2 * i] - e.lambdas[i]) / an);
    }
  }
  const bool ok = recon <= 1e-9 && unit <= 1e-10 && pairing <= 1e-9;
  return {ok, fmt("reconstruction %.2e (1e-9), unitarity %.2e (1e-10), pairing %.2e (1e-9)", recon, unit, pairing)};
}

Outcome cauchy_schwarz() {
  Rng rng(1003);
  int violations = 0;
  double worst = 0.0;
  InnerProductSpace s;
  FundamentalDecomposition d;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 1 + (t / 100) % 6;
    if (t % 100 == 0) {
      const std::size_t np = std::uniform_int_distribution<std::size_t>(0, n)(rng);
      s = InnerProductSpace(testing::random_gram(rng, np, n - np, 0));
      d = fundamental_decomposition(s);
    }
    const QMatrix v = testing::random_vector(rng, n);
    const QMatrix w = testing::random_vector(rng, n);
    const double lhs = norm2(inner(s, v, w));
    const double rhs = std::pow(j_norm(s, d, v), 2) * std::pow(j_norm(s, d, w), 2);
    worst = std::max(worst, lhs / rhs);
    if (lhs > rhs * (1 + 1e-10)) ++violations;
  }
  return {violations == 0, fmt("%.0f violations in 10^4 pairs, max ratio %.12f", violations, worst)};
}

Outcome ortho_equivalences() {
  Rng rng(1004);
  int disagreements = 0, yes = 0, degenerate_ambient = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const auto sig = testing::random_signature(rng, n, t % 2 == 0);
    const testing::SubspaceCase c =
        testing::random_subspace_case(rng, testing::random_gram_case(rng, sig[0], sig[1], sig[2]));
    const Subspace l(c.space, c.span);
    const OrthoCertificate cert = is_ortho_complemented(l);
    bool agree = kansas_check(l).holds() == cert.ortho_complemented;
    if (cert.restricted_gram_nonsingular)
      agree = agree && *cert.restricted_gram_nonsingular == cert.ortho_complemented;
    else
      ++degenerate_ambient;
    if (!agree) ++disagreements;
    if (cert.ortho_complemented) ++yes;
  }
  return {disagreements == 0, fmt("%.0f disagreements; %.0f ortho-complemented, %.0f in degenerate ambients",
                                  disagreements, yes, degenerate_ambient)};
}

Outcome self_polar_iteration() {
  Rng rng(1005);
  double fixed = 0.0, oracle = 0.0;
  std::size_t max_iter = 0;
  int violations = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 6;
    const testing::GramCase g = random_invertible_gram(rng, n);
    const InnerProductSpace s(g.gram);
    const SelfPolarResult r = self_polar(s);
    const double mn = s.scale();
    fixed = std::max(fixed, frobenius_norm(r.hinf - g.gram * solve(r.hinf, g.gram)) / mn);
    oracle = std::max(oracle, frobenius_norm(r.hinf - abs_of(g)) / mn);
    max_iter = std::max(max_iter, r.iterations);
    const QMatrix first_polar = polar(s, r.iterates.front()).matrix;
    for (int k = 0; k < 20; ++k) {
      const QMatrix v = testing::random_vector(rng, n);
      for (std::size_t i = 0; i + 1 < r.iterates.size(); ++i)
        if (quadratic_form(r.iterates[i + 1], v) > quadratic_form(r.iterates[i], v) * (1 + 1e-12)) ++violations;
      if (std::sqrt(quadratic_form(r.hinf, v)) <
          std::sqrt(quadratic_form(first_polar, v)) / std::sqrt(2.0) * (1 - 1e-10))
        ++violations;
    }
  }
  const bool ok = fixed <= 1e-10 && oracle <= 1e-8 && max_iter <= 60 && violations == 0;
  return {ok, fmt("fixed point %.2e (1e-10), |M| oracle %.2e (1e-8), ", fixed, oracle) +
                  fmt("max iterations %.0f (60), %.0f bound violations", static_cast<double>(max_iter), violations)};
}

Outcome polar_involution() {
  Rng rng(1006);
  double worst = 0.0;
  int reversal_failures = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 6;
    const InnerProductSpace s(random_invertible_gram(rng, n).gram);
    const QMatrix h = random_pd(rng, n);
    worst = std::max(worst, frobenius_norm(polar(s, polar(s, h).matrix).matrix - h) / frobenius_norm(h));
  }
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 6;
    const InnerProductSpace s(random_invertible_gram(rng, n).gram);
    const QMatrix h1 = random_pd(rng, n);
    const QMatrix x = testing::random_matrix(rng, n, n);
    const QMatrix h2 = hermitian_part(h1 + adjoint(x) * x);
    const QMatrix gap = polar(s, h1).matrix - polar(s, h2).matrix;
    const double smallest = hermitian_eig(hermitian_part(gap)).lambdas.back();
    if (smallest < -1e-10 * frobenius_norm(polar(s, h1).matrix)) ++reversal_failures;
  }
  return {worst <= 1e-10 && reversal_failures == 0,
          fmt("involution %.2e (1e-10), %.0f order-reversal failures in 50 pairs", worst, reversal_failures)};
}

Outcome stein_sofsof() {
  Rng rng(1007);
  double identity = 0.0, agreement = 0.0, min_c = 1e300;
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    const SteinProblem prob = testing::random_positive_stein_problem(rng);
    const QMatrix pd = stein_solve_direct(prob);
    const QMatrix ps = stein_solve_series(prob);
    agreement = std::max(agreement, frobenius_norm(pd - ps));
    const Scaffold sc = build_scaffold(prob, pd);
    const QMatrix s = vcat(vcat(prob.a, prob.c), prob.n);
    identity = std::max(identity, frobenius_norm(adjoint(s) * sc.jtilde * s - pd) / frobenius_norm(pd));
    const SofsofReport r = verify_sofsof(sc);
    if (!r.all_passed()) ++failures;
    if (r.k0_class.uniform_constant) min_c = std::min(min_c, *r.k0_class.uniform_constant);
  }
  const bool ok = identity <= 1e-8 && agreement <= 1e-8 && failures == 0 && min_c > 0.0;
  return {ok, fmt("Stein identity %.2e (1e-8), solver agreement %.2e (1e-8), ", identity, agreement) +
                  fmt("%.0f scaffold failures, min c %.3e", failures, min_c)};
}

Outcome minkowski_dual() {
  Rng rng(1008);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 4;
    const std::size_t count = 1 + t % 3;
    std::vector<QMatrix> mats;
    for (std::size_t k = 0; k < count; ++k) {
      const QMatrix x =
          testing::random_rank_matrix(rng, n, n, std::uniform_int_distribution<std::size_t>(0, n)(rng));
      mats.push_back(adjoint(x) * x);
    }
    const SemiNormFamily f(mats);
    const QMatrix v = testing::random_vector(rng, n);
    const double closed = minkowski(f, v);
    worst = std::max(worst, std::abs(closed - minkowski_bisection(f, v)) / std::max(1.0, closed));
  }
  return {worst <= 1e-10, fmt("max deviation %.2e (1e-10)", worst)};
}

Outcome cli_determinism() {
  int mismatches = 0, cases = 0;
  for (const auto& c : testing::cli_cases()) {
    ++cases;
    std::ostringstream o1, o2, e1, e2;
    const int r1 = cli::run(c.args, o1, e1);
    const int r2 = cli::run(c.args, o2, e2);
    if (r1 != 0 || r2 != 0 || o1.str() != o2.str() || o1.str() != testing::read_file(testing::golden_path(c.name)))
      ++mismatches;
  }
  return {mismatches == 0, fmt("%.0f of %.0f fixture runs differ from each other or the golden file", mismatches, cases)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 for none
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "embedding homomorphism", 1.0, embedding_homomorphism},
      {2, "spectral theorem", 5.0, spectral_theorem},
      {3, "Cauchy-Schwarz", 0.0, cauchy_schwarz},
      {4, "ortho-complementation equivalences", 10.0, ortho_equivalences},
      {5, "self-polar iteration", 0.0, self_polar_iteration},
      {6, "polar involution and order reversal", 0.0, polar_involution},
      {7, "Stein equation and scaffold", 30.0, stein_sofsof},
      {8, "Minkowski functional", 0.0, minkowski_dual},
      {9, "CLI determinism", 0.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.time_limit > 0.0) {
      timing += fmt(" (limit %.0f s)", c.time_limit);
      if (secs >= c.time_limit) o.pass = false;
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d: %s; %s; %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
  }
  return failed == 0 ? 0 : 1;
}
