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

#include "qcert/densify.hpp"

#include <cmath>
#include <stdexcept>

namespace qcert {

Polynomial theta(int r, int nvars) {
  if (r < 1) throw std::invalid_argument("theta requires r >= 1");
  if (nvars < 1) throw std::invalid_argument("theta requires nvars >= 1");
  Polynomial p = Polynomial::constant(nvars, 1.0);
  for (int i = 0; i < nvars; ++i) p.add_term(Monomial::variable(i, 2 * r), 1.0);
  return p;
}

Polynomial theta_lower(int r, int nvars) {
  if (r < 0) throw std::invalid_argument("theta_lower requires r >= 0");
  if (nvars < 1) throw std::invalid_argument("theta_lower requires nvars >= 1");
  Polynomial p(nvars);
  double factorial = 1.0;
  for (int k = 0; k <= r; ++k) {
    if (k > 0) factorial *= k;
    for (int j = 0; j < nvars; ++j) {
      if (k == 0) {
        p.add_term(Monomial(), 1.0);
      } else {
        p.add_term(Monomial::variable(j, 2 * k), 1.0 / factorial);
      }
    }
  }
  return p;
}

ApproximateResult approximate(const Polynomial& f, const SemiAlgebraicSet& set,
                              double epsilon, const DensifyOptions& options) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  ApproximateResult result;
  const int n = f.nvars();
  const int r0 = f.degree().value_or(0) / 2 + 1;

  Polynomial bump0 = perturbation_polynomial(options.kind, r0, n);
  Polynomial f_e0 = f + bump0 * epsilon;

  MinimizeOptions min_options = options.certify.minimize;
  min_options.seed = options.certify.seed;
  MinimizeResult min_result = minimize(f_e0, set, min_options);
  switch (min_result.status) {
    case MinimizeStatus::Converged:
      break;
    case MinimizeStatus::Unbounded:
      result.status = ApproximateStatus::Unbounded;
      result.note = min_result.note;
      return result;
    case MinimizeStatus::NoInteriorFound:
      result.status = ApproximateStatus::NoInteriorFound;
      result.note = min_result.note;
      return result;
    case MinimizeStatus::ObjectiveNotConvex:
    case MinimizeStatus::ConstraintNotConcave:
      result.status = ApproximateStatus::PreconditionFailed;
      result.note = min_result.note;
      return result;
    case MinimizeStatus::NewtonFailure:
      result.status = ApproximateStatus::Inconclusive;
      result.note = min_result.note;
      return result;
  }
  const KktSolution& sol = *min_result.solution;
  result.kkt = sol;

  LagrangianResult lag = build_lagrangian(f_e0, set, sol, options.certify.cert_tol);
  if (!lag.lagrangian) {
    result.status = ApproximateStatus::Inconclusive;
    result.note = lag.error;
    return result;
  }

  SosOptions sos_options = options.certify.sos;
  sos_options.seed = options.certify.seed;
  for (int r = r0; r <= options.r_max; ++r) {
    Polynomial bump_r = perturbation_polynomial(options.kind, r, n);
    Polynomial candidate = lag.lagrangian->poly + bump_r * epsilon;
    Polynomial cleaned = drop_small_terms(candidate, options.certify.snap_tol);
    SosResult sos = is_sos(cleaned, sos_options);
    switch (sos.status) {
      case SosStatus::Sos: {
        Polynomial total_bump = (bump0 + bump_r) * epsilon;
        Polynomial f_eps = f + total_bump;

        QcCertificate cert;
        cert.nvars = n;
        cert.lambda = sol.lambda;
        cert.sigma = std::move(*sos.decomposition);
        // The perturbed minimum folds into sigma when it is nonnegative
        // (a constant square); otherwise it stays as the certificate's
        // stated bound.
        if (sol.fstar >= 0.0) {
          cert.fstar = 0.0;
          if (sol.fstar > 0.0)
            cert.sigma.factors.push_back(
                Polynomial::constant(n, std::sqrt(sol.fstar)));
        } else {
          cert.fstar = sol.fstar;
        }
        cert.perturbation = PerturbationRecord{epsilon, r0, r, options.kind,
                                               epsilon * (bump0 + bump_r).l1_norm()};
        Polynomial identity = f_eps - cert.fstar - cert.sigma.reexpand(n);
        for (std::size_t j = 0; j < set.size(); ++j)
          identity = identity - set.constraints[j] * cert.lambda[j];
        cert.identity_residual = identity.l1_norm();
        cert.nonnegative_on_set = cert.fstar >= -options.certify.cert_tol;

        result.trace.emplace_back(r, "sos");
        result.status = ApproximateStatus::Succeeded;
        result.f_eps = std::move(f_eps);
        result.certificate = std::move(cert);
        return result;
      }
      case SosStatus::NotSos:
      case SosStatus::NotSosByDegree:
        result.trace.emplace_back(r, "not sos");
        break;
      case SosStatus::Inconclusive:
        result.trace.emplace_back(r, "inconclusive: " + sos.note);
        break;
    }
  }
  result.status = ApproximateStatus::RMaxExhausted;
  result.note = "no exponent up to r_max produced a sum of squares";
  return result;
}

}  // namespace qcert
