#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkrein/json_io.hpp"
#include "qkrein/qkrein.hpp"

namespace qkrein::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericFailure = 2 };

inline QMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline json signature_json(const std::array<std::size_t, 3>& s) { return json::array({s[0], s[1], s[2]}); }

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json subspace_report_json(const SubspaceReport& r) {
  return {{"tag", std::string(to_string(r.tag))},
          {"degenerate", r.degenerate},
          {"uniform_constant", optional_json(r.uniform_constant)},
          {"gram_spectrum", r.gram_spectrum}};
}

inline json ortho_json(const OrthoCertificate& c) {
  return {{"ortho_complemented", c.ortho_complemented},
          {"span_rank", c.span_rank},
          {"ambient_dim", c.ambient_dim},
          {"companion_dim", c.companion_dim},
          {"restricted_gram_nonsingular",
           c.restricted_gram_nonsingular ? json(*c.restricted_gram_nonsingular) : json(nullptr)}};
}

inline json krein_json(const KreinReport& k) {
  return {{"is_krein", k.is_krein},
          {"signature", signature_json(k.signature)},
          {"pontryagin_index", k.pontryagin_index},
          {"gram_min_eigen_magnitude", k.gram_min_eigen_magnitude},
          {"natural_norm", matrix_to_json(k.natural_norm)}};
}

struct Options {
  std::string matrix, gram, subspace, a, c, n;
  double tol = 0.0;
  std::size_t max_iter = 0;
};

/// Runs one subcommand; JSON report to `out`, diagnostics to `err`.
/// Exit codes: 0 success, 1 input or usage error, 2 numeric failure (the
/// partial report is still written).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternionic indefinite inner product and Krein space toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* eig = app.add_subcommand("eig", "Spectral decomposition of a Hermitian quaternionic matrix");
  eig->add_option("--matrix", o.matrix, "Hermitian matrix file")->required();

  auto* decompose = app.add_subcommand("decompose", "Fundamental decomposition of a Gram matrix");
  decompose->add_option("--gram", o.gram, "Gram matrix file")->required();

  auto* classify = app.add_subcommand("classify", "Sign classification of a subspace");
  auto* companion = app.add_subcommand("companion", "Orthogonal companion of a subspace");
  auto* orthocheck = app.add_subcommand("orthocheck", "Ortho-complementation test of a subspace");
  for (auto* sub : {classify, companion, orthocheck}) {
    sub->add_option("--gram", o.gram, "Gram matrix file")->required();
    sub->add_option("--subspace", o.subspace, "matrix whose columns span the subspace")->required();
  }

  auto* selfpolar = app.add_subcommand("selfpolar", "Self-polar norm iteration");
  selfpolar->add_option("--gram", o.gram, "Gram matrix file")->required();
  o.tol = kSelfPolarTol;
  o.max_iter = kSelfPolarMaxIter;
  selfpolar->add_option("--tol", o.tol, "relative stopping tolerance")->capture_default_str();
  selfpolar->add_option("--max-iter", o.max_iter, "iteration limit")->capture_default_str();

  auto* stein = app.add_subcommand("stein", "Stein equation and interpolation scaffold checks");
  stein->add_option("--a", o.a, "A (x by x)")->required();
  stein->add_option("--c", o.c, "C (y by x)")->required();
  stein->add_option("--n", o.n, "N (u by x)")->required();
  double stein_tol = kSteinTol;
  std::size_t stein_terms = kSteinMaxTerms;
  stein->add_option("--tol", stein_tol, "series truncation tolerance")->capture_default_str();
  stein->add_option("--max-iter", stein_terms, "maximum number of series terms")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  json report;
  int code = kOk;
  auto emit = [&] { out << report.dump(2) << '\n'; };

  try {
    if (*eig) {
      const QMatrix a = load_matrix(o.matrix);
      report["command"] = "eig";
      report["inputs"] = {{"matrix", matrix_to_json(a)}};
      const HermEig e = hermitian_eig(a);
      report["results"] = {{"lambdas", e.lambdas}, {"vectors", matrix_to_json(e.vectors)}};
      report["tolerances"] = {{"jacobi_off_diagonal_relative", 1e-13}};
      report["passed"] = true;
    } else if (*decompose) {
      const InnerProductSpace s(load_matrix(o.gram));
      report["command"] = "decompose";
      report["inputs"] = {{"gram", matrix_to_json(s.gram())}};
      const FundamentalDecomposition d = fundamental_decomposition(s);
      const KreinReport k = verify_krein(s);
      report["results"] = {{"signature", signature_json(d.signature())},
                           {"lambdas", d.lambdas},
                           {"vplus", matrix_to_json(d.vplus)},
                           {"vminus", matrix_to_json(d.vminus)},
                           {"neutral", matrix_to_json(d.neutral)},
                           {"j", matrix_to_json(d.j)},
                           {"krein", krein_json(k)}};
      report["tolerances"] = {{"neutrality_relative", kNeutralityTol}};
      report["passed"] = true;
    } else if (*classify || *companion || *orthocheck) {
      const auto space = std::make_shared<const InnerProductSpace>(load_matrix(o.gram));
      const QMatrix span = load_matrix(o.subspace);
      const Subspace l(space, span);
      report["inputs"] = {{"gram", matrix_to_json(space->gram())}, {"subspace", matrix_to_json(span)}};
      report["tolerances"] = {{"neutrality_relative", kNeutralityTol}};
      report["passed"] = true;
      if (*classify) {
        report["command"] = "classify";
        report["results"] = subspace_report_json(classify_subspace(l));
      } else if (*companion) {
        report["command"] = "companion";
        const Subspace k = orthogonal_companion(l);
        report["results"] = {{"dim", k.dim()},
                             {"basis", matrix_to_json(k.basis())},
                             {"restricted_gram", matrix_to_json(restricted_gram(k))}};
      } else {
        report["command"] = "orthocheck";
        const OrthoCertificate cert = is_ortho_complemented(l);
        const KansasResult kc = kansas_check(l);
        json res = ortho_json(cert);
        res["kansas"] = {{"isotropic_in_kernel", kc.isotropic_in_kernel},
                         {"quotient_ortho_complemented", kc.quotient_ortho_complemented}};
        report["results"] = std::move(res);
      }
    } else if (*selfpolar) {
      const InnerProductSpace s(load_matrix(o.gram));
      report["command"] = "selfpolar";
      report["inputs"] = {{"gram", matrix_to_json(s.gram())}};
      report["tolerances"] = {{"tol", o.tol}, {"max_iter", o.max_iter}};
      auto fill = [&](const SelfPolarResult& r) {
        report["results"] = {{"hinf", matrix_to_json(r.hinf)}, {"iterations", r.iterations}, {"history", r.history}};
      };
      try {
        const SelfPolarResult r = self_polar(s, o.tol, o.max_iter);
        fill(r);
        report["passed"] = true;
      } catch (const SelfPolarFailure& f) {
        fill(f.partial());
        throw;
      }
    } else if (*stein) {
      SteinProblem prob{load_matrix(o.a), load_matrix(o.c), load_matrix(o.n)};
      prob.validate();
      report["command"] = "stein";
      report["inputs"] = {{"a", matrix_to_json(prob.a)}, {"c", matrix_to_json(prob.c)}, {"n", matrix_to_json(prob.n)}};
      report["tolerances"] = {{"series_tol", stein_tol},
                              {"max_terms", stein_terms},
                              {"stein_identity_relative", kSteinIdentityTol},
                              {"neutrality_relative", kNeutralityTol}};
      json res;
      const QMatrix p = stein_solve_direct(prob);
      res["p"] = matrix_to_json(p);
      report["results"] = res;
      const QMatrix ps = stein_solve_series(prob, stein_tol, stein_terms);
      res["p_series"] = matrix_to_json(ps);
      res["solver_agreement"] = frobenius_norm(p - ps) / std::max(frobenius_norm(p), 1.0);
      report["results"] = res;
      const Scaffold sc = build_scaffold(prob, p);
      const SofsofReport sr = verify_sofsof(sc);
      res["jtilde"] = matrix_to_json(sc.jtilde);
      res["k0_basis"] = matrix_to_json(sc.k0.basis());
      res["stein_identity_error"] = sr.stein_identity_error;
      res["stein_identity_ok"] = sr.stein_identity_ok;
      res["k0_classification"] = subspace_report_json(sr.k0_class);
      res["uniformly_positive"] = sr.uniformly_positive;
      res["ortho"] = ortho_json(sr.ortho);
      res["companion_gram"] = matrix_to_json(sr.companion_gram);
      res["companion_krein"] = krein_json(sr.companion_krein);
      report["results"] = std::move(res);
      report["passed"] = sr.all_passed();
    }
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ScaffoldRefused& e) {
    report["passed"] = false;
    report["error"] = e.what();
    report["p_eigenvalues"] = e.eigenvalues();
    code = kNumericFailure;
  } catch (const Error& e) {
    report["passed"] = false;
    report["error"] = e.what();
    code = kNumericFailure;
  }
  if (code != kOk) err << "error: " << report["error"].get<std::string>() << '\n';
  emit();
  return code;
}

}  // namespace qkrein::cli
