/*
   Copyright 2026 The qcert authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "qcert/certify.hpp"

#include <cmath>

#include "qcert/densify.hpp"
#include "qcert/rng.hpp"

namespace qcert {

namespace {

Polynomial combination(const Polynomial& f, const SemiAlgebraicSet& set, double fstar,
                       std::span<const double> lambda) {
  Polynomial out = f - fstar;
  for (std::size_t j = 0; j < set.size(); ++j)
    out = out - set.constraints[j] * lambda[j];
  return out;
}

double gradient_norm_at(const Polynomial& p, std::span<const double> x) {
  double out = 0.0;
  for (const auto& d : p.gradient()) {
    double v = d.evaluate(x);
    out += v * v;
  }
  return std::sqrt(out);
}

QcCertificate assemble_certificate(const Polynomial& f, const SemiAlgebraicSet& set,
                                   const KktSolution& sol, SosDecomposition sigma,
                                   double cert_tol) {
  QcCertificate cert;
  cert.nvars = f.nvars();
  cert.lambda = sol.lambda;
  cert.fstar = sol.fstar;
  cert.sigma = std::move(sigma);
  Polynomial target = combination(f, set, sol.fstar, sol.lambda);
  cert.identity_residual = l1_distance(target, cert.sigma.reexpand(f.nvars()));
  cert.nonnegative_on_set = sol.fstar >= -cert_tol;
  return cert;
}

}  // namespace

Polynomial perturbation_polynomial(PerturbationKind kind, int r, int nvars) {
  return kind == PerturbationKind::Theta ? theta(r, nvars) : theta_lower(r, nvars);
}

LagrangianResult build_lagrangian(const Polynomial& f, const SemiAlgebraicSet& set,
                                  const KktSolution& sol, double tol) {
  LagrangianResult result;
  if (sol.lambda.size() != set.size()) {
    result.error = "multiplier count does not match the constraint count";
    return result;
  }
  for (double l : sol.lambda) {
    if (l < 0) {
      result.error = "negative multiplier";
      return result;
    }
  }
  Polynomial poly = combination(f, set, sol.fstar, sol.lambda);
  double value = poly.evaluate(sol.xstar);
  double grad_norm = gradient_norm_at(poly, sol.xstar);
  if (std::abs(value) > tol || grad_norm > tol) {
    result.error = "Lagrangian fails its first-order conditions at the minimizer (value " +
                   format_double(value) + ", gradient norm " + format_double(grad_norm) + ")";
    return result;
  }
  result.lagrangian = Lagrangian{std::move(poly), value, grad_norm};
  return result;
}

namespace {

// Shared tail of both certification paths: minimize, build the Lagrangian,
// test it for sos, assemble.
CertifyResult certify_from_minimum(const Polynomial& f, const SemiAlgebraicSet& set,
                                   const CertifyOptions& options, CertifyResult result) {
  MinimizeOptions min_options = options.minimize;
  min_options.seed = options.seed;
  MinimizeResult min_result = minimize(f, set, min_options);
  switch (min_result.status) {
    case MinimizeStatus::Converged:
      break;
    case MinimizeStatus::Unbounded:
      result.status = CertifyStatus::Unbounded;
      result.note = min_result.note;
      return result;
    case MinimizeStatus::NoInteriorFound:
      result.status = CertifyStatus::NoInteriorFound;
      result.note = min_result.note;
      return result;
    case MinimizeStatus::ObjectiveNotConvex:
    case MinimizeStatus::ConstraintNotConcave:
      result.status = CertifyStatus::PreconditionFailed;
      result.failing_index =
          min_result.status == MinimizeStatus::ObjectiveNotConvex ? -1
                                                                  : min_result.failing_constraint;
      result.note = min_result.note;
      return result;
    case MinimizeStatus::NewtonFailure:
      result.status = CertifyStatus::Inconclusive;
      result.note = min_result.note;
      return result;
  }
  result.kkt = min_result.solution;

  LagrangianResult lag = build_lagrangian(f, set, *min_result.solution, options.cert_tol);
  if (!lag.lagrangian) {
    result.status = CertifyStatus::Inconclusive;
    result.note = lag.error;
    return result;
  }
  result.lagrangian = lag.lagrangian;

  SosOptions sos_options = options.sos;
  sos_options.seed = options.seed;
  Polynomial cleaned = drop_small_terms(lag.lagrangian->poly, options.snap_tol);
  SosResult sos = is_sos(cleaned, sos_options);
  switch (sos.status) {
    case SosStatus::Sos:
      break;
    case SosStatus::NotSos:
    case SosStatus::NotSosByDegree:
      result.status = CertifyStatus::NeedsPerturbation;
      result.dual = sos.dual;
      result.note = sos.note.empty() ? "the Lagrangian is not a sum of squares" : sos.note;
      return result;
    case SosStatus::Inconclusive:
      result.status = CertifyStatus::Inconclusive;
      result.note = sos.note;
      return result;
  }

  QcCertificate cert = assemble_certificate(f, set, *min_result.solution,
                                            std::move(*sos.decomposition), options.cert_tol);
  if (cert.identity_residual > options.cert_tol) {
    result.status = CertifyStatus::Inconclusive;
    result.note = "certificate identity residual " + format_double(cert.identity_residual) +
                  " exceeds tolerance";
    return result;
  }
  // Guard against numerical corruption of sigma; the construction yields a
  // convex sigma analytically.
  Polynomial sigma_poly = cert.sigma.reexpand(f.nvars());
  ScreenReport convex = convexity_screen(sigma_poly, Rng(options.seed ^ 0x51317ull),
                                         options.screen);
  if (!convex.passed) {
    result.status = CertifyStatus::Inconclusive;
    result.note = "sigma failed the convexity screen (min eigenvalue " +
                  format_double(convex.min_eigenvalue) + ")";
    return result;
  }
  result.status = CertifyStatus::Certified;
  result.certificate = std::move(cert);
  return result;
}

}  // namespace

CertifyResult certify(const Polynomial& f, const SemiAlgebraicSet& set,
                      const CertifyOptions& options) {
  return certify_from_minimum(f, set, options, CertifyResult{});
}

CertifyResult certify_sos_convex_path(const Polynomial& f, const SemiAlgebraicSet& set,
                                      const CertifyOptions& options) {
  CertifyResult result;
  SosOptions sos_options = options.sos;
  sos_options.seed = options.seed;

  SosConvexityResult objective = is_sos_convex(f, sos_options);
  if (objective.status == SosConvexityStatus::Inconclusive) {
    result.status = CertifyStatus::Inconclusive;
    result.note = "sos-convexity test of the objective was inconclusive";
    return result;
  }
  if (objective.status == SosConvexityStatus::NotSosConvex) {
    result.status = CertifyStatus::NotApplicable;
    result.failing_index = -1;
    result.note = "objective is not sos-convex";
    return result;
  }

  std::vector<MatrixPolynomial> constraint_factors;
  constraint_factors.reserve(set.size());
  for (std::size_t j = 0; j < set.size(); ++j) {
    SosConvexityResult gate = is_sos_convex(-set.constraints[j], sos_options);
    if (gate.status == SosConvexityStatus::Inconclusive) {
      result.status = CertifyStatus::Inconclusive;
      result.note = "sos-convexity test of constraint " + std::to_string(j + 1) +
                    " was inconclusive";
      return result;
    }
    if (gate.status == SosConvexityStatus::NotSosConvex) {
      result.status = CertifyStatus::NotApplicable;
      result.failing_index = static_cast<int>(j);
      result.note = "-g_" + std::to_string(j + 1) + " is not sos-convex";
      return result;
    }
    constraint_factors.push_back(gate.witness->factor);
  }

  result = certify_from_minimum(f, set, options, std::move(result));
  if (result.status != CertifyStatus::Certified || !result.kkt) return result;

  // Stack H = [F; sqrt(lambda_1) G_1; ...; sqrt(lambda_m) G_m] so that
  // hessian(L_f) = H^T H.
  std::vector<MatrixPolynomial> blocks;
  blocks.push_back(objective.witness->factor);
  for (std::size_t j = 0; j < set.size(); ++j) {
    MatrixPolynomial scaled = constraint_factors[j];
    double root = std::sqrt(std::max(result.kkt->lambda[j], 0.0));
    for (int r = 0; r < scaled.rows(); ++r)
      for (int c = 0; c < scaled.cols(); ++c) scaled.at(r, c) = scaled.at(r, c) * root;
    blocks.push_back(std::move(scaled));
  }
  MatrixPolynomial stacked = MatrixPolynomial::vstack(blocks);
  double residual =
      (result.lagrangian->poly.hessian() - stacked.transpose() * stacked).max_entry_l1();
  result.stacked = StackedHessianWitness{std::move(stacked), residual};
  return result;
}

VerificationReport verify_certificate(const QcCertificate& certificate, const Polynomial& f,
                                      const SemiAlgebraicSet& set,
                                      const VerifyOptions& options) {
  VerificationReport report;
  auto add = [&](const std::string& name, bool passed, double value, double bound,
                 std::string detail = "") {
    report.checks.push_back(VerificationCheck{name, passed, value, bound, std::move(detail)});
  };

  // (1) structural shape
  bool shape_ok = certificate.lambda.size() == set.size() && certificate.nvars == f.nvars();
  add("structure", shape_ok, static_cast<double>(certificate.lambda.size()),
      static_cast<double>(set.size()),
      shape_ok ? "" : "multiplier count or variable count does not match the problem");
  if (!shape_ok) return report;

  // (2) multiplier signs
  double min_lambda = 0.0;
  for (double l : certificate.lambda) min_lambda = std::min(min_lambda, l);
  add("lambda_nonnegative", min_lambda >= 0.0, min_lambda, 0.0);

  // (3) re-expand sigma and re-derive the identity with plain arithmetic
  Polynomial sigma = certificate.sigma.reexpand(f.nvars());
  Polynomial target = f;
  if (certificate.perturbation) {
    const PerturbationRecord& rec = certificate.perturbation.value();
    bool rec_ok = rec.epsilon > 0 && rec.r >= 1 && rec.r0 >= 1;
    Polynomial bump(f.nvars());
    if (rec_ok) {
      bump = (perturbation_polynomial(rec.kind, rec.r0, f.nvars()) +
              perturbation_polynomial(rec.kind, rec.r, f.nvars())) *
             rec.epsilon;
      target = f + bump;
    }
    double stated = rec.l1_distance;
    double actual = bump.l1_norm();
    bool distance_ok = rec_ok && std::abs(stated - actual) <= 1e-9 * (1.0 + actual);
    add("perturbation_record", distance_ok, stated, actual,
        rec_ok ? "" : "malformed perturbation record");
  }
  Polynomial residual_poly = target - certificate.fstar - sigma;
  for (std::size_t j = 0; j < set.size(); ++j)
    residual_poly = residual_poly - set.constraints[j] * certificate.lambda[j];
  double identity = residual_poly.l1_norm();
  add("identity_residual", identity <= options.cert_tol, identity, options.cert_tol);

  // (4) nonnegativity claim
  if (certificate.nonnegative_on_set) {
    add("fstar_nonnegative", certificate.fstar >= -options.cert_tol, certificate.fstar,
        -options.cert_tol,
        "the certificate claims the target is nonnegative on the set");
  }

  // (5) sigma convexity screen
  ScreenReport convex =
      convexity_screen(sigma, Rng(options.seed ^ 0x7e51f1edull), options.screen);
  add("sigma_convexity", convex.passed, convex.min_eigenvalue, -options.screen.tol);

  return report;
}

}  // namespace qcert
