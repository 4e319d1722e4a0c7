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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcert/kkt.hpp"
#include "qcert/polynomial.hpp"
#include "qcert/sos.hpp"

namespace qcert {

enum class PerturbationKind { Theta, ThetaLower };

/// Bookkeeping for the even-power perturbation applied to reach the
/// certificate: the target polynomial is f + epsilon*(P_{r0} + P_r) where
/// P is the perturbation family of the given kind.
struct PerturbationRecord {
  double epsilon = 0.0;
  int r0 = 1;
  int r = 1;
  PerturbationKind kind = PerturbationKind::Theta;
  double l1_distance = 0.0;  // = epsilon * ||P_{r0} + P_r||_1
};

/// f - fstar - sum_j lambda_j g_j, with its defining first-order data.
struct Lagrangian {
  Polynomial poly;
  double value_at_minimizer = 0.0;
  double gradient_norm_at_minimizer = 0.0;
};

struct LagrangianResult {
  std::optional<Lagrangian> lagrangian;
  std::string error;  // set when the first-order invariants fail
};

/// Builds the Lagrangian and checks that it vanishes to first order at the
/// reported minimizer (within tol); a violation rejects with the residuals
/// in the error string.
LagrangianResult build_lagrangian(const Polynomial& f, const SemiAlgebraicSet& set,
                                  const KktSolution& sol, double tol = 1e-6);

/// Certificate of membership in the convex quadratic module: the identity
/// f_target - fstar = sigma + sum_j lambda_j g_j with lambda >= 0 and sigma
/// a convex sum of squares. f_target is f itself, or its perturbation when
/// a record is present.
struct QcCertificate {
  int nvars = 1;
  SosDecomposition sigma;
  std::vector<double> lambda;
  double fstar = 0.0;
  std::optional<PerturbationRecord> perturbation;
  double identity_residual = 0.0;
  bool nonnegative_on_set = false;  // claims fstar >= 0
};

enum class CertifyStatus {
  Certified,
  NeedsPerturbation,  // the Lagrangian is not a sum of squares
  Inconclusive,
  Unbounded,
  NoInteriorFound,
  PreconditionFailed,  // convexity/concavity screens or Slater validation
  NotApplicable,       // sos-convex pathway gate failed
};

struct CertifyOptions {
  double cert_tol = 1e-6;
  MinimizeOptions minimize;
  SosOptions sos;
  ScreenOptions screen;
  std::uint64_t seed = 0;
  /// Coefficients below snap_tol * (1 + l1) are cleared from the Lagrangian
  /// before the Gram solve; the discarded mass lands in identity_residual.
  double snap_tol = 1e-10;
};

struct StackedHessianWitness {
  MatrixPolynomial factor;  // H with hessian(L_f) ~ H^T H
  double residual = 0.0;
};

struct CertifyResult {
  CertifyStatus status = CertifyStatus::Inconclusive;
  std::optional<QcCertificate> certificate;
  std::optional<KktSolution> kkt;
  std::optional<Lagrangian> lagrangian;
  std::optional<NotSosCertificate> dual;  // when NeedsPerturbation
  std::optional<StackedHessianWitness> stacked;  // sos-convex pathway only
  int failing_index = -2;  // NotApplicable: -1 objective, j >= 0 constraint
  std::string note;
};

/// Solves min f over K, forms the Lagrangian, and tests it for sos; on
/// success assembles the certificate with sigma = the decomposition of L_f.
CertifyResult certify(const Polynomial& f, const SemiAlgebraicSet& set,
                      const CertifyOptions& options = {});

/// Gate: f sos-convex and every -g_j sos-convex. When the gate passes, the
/// stacked factor H with hessian(L_f) = H^T H is recorded and certification
/// proceeds as in certify (the sos-ness of L_f is still established by SDP).
CertifyResult certify_sos_convex_path(const Polynomial& f, const SemiAlgebraicSet& set,
                                      const CertifyOptions& options = {});

struct VerificationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct VerifyOptions {
  double cert_tol = 1e-6;
  ScreenOptions screen;
  std::uint64_t seed = 0;
};

/// Independent re-check of a claimed certificate using polynomial
/// arithmetic only; never calls the SDP engine. Reconstructs sigma from the
/// stored factors, re-derives the identity against f (or its perturbation),
/// checks the multiplier signs, the nonnegativity claim, and screens sigma
/// for convexity.
VerificationReport verify_certificate(const QcCertificate& certificate, const Polynomial& f,
                                      const SemiAlgebraicSet& set,
                                      const VerifyOptions& options = {});

/// The perturbation polynomial of the given kind (shared with densify).
Polynomial perturbation_polynomial(PerturbationKind kind, int r, int nvars);

}  // namespace qcert
