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

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcert/polynomial.hpp"
#include "qcert/sdp.hpp"

namespace qcert {

/// Candidate monomial basis for a Gram representation f = z^T Q z.
struct GramBasis {
  std::vector<Monomial> monomials;  // distinct, graded-lex sorted
  bool empty() const { return monomials.empty(); }
  std::size_t size() const { return monomials.size(); }
};

struct SosOptions {
  bool prune = true;  // restrict the basis to the half Newton polytope
  SdpOptions sdp;
  double factor_cutoff = 1e-9;  // relative eigenvalue cutoff for factors
  std::uint64_t seed = 0;       // used only for counterexample sampling
};

/// All monomials eligible for a Gram basis of f: degree <= deg(f)/2, and
/// (with prune) exponent vectors inside the half Newton polytope of f.
/// Returns nullopt when deg(f) is odd — f cannot be a sum of squares.
std::optional<GramBasis> build_basis(const Polynomial& f, bool prune);

enum class SosStatus { Sos, NotSos, NotSosByDegree, Inconclusive };

struct SosDecomposition {
  GramBasis basis;
  Eigen::MatrixXd gram;
  std::vector<Polynomial> factors;  // f ~ sum q_i^2
  double residual = 0.0;            // l1(f - sum q_i^2)
  double gram_min_eigenvalue = 0.0;

  Polynomial reexpand(int nvars) const;  // sum q_i^2 by plain arithmetic
};

/// Separating functional rejecting membership in the sos cone:
/// sum_gamma y_gamma A_gamma is negative semidefinite (within tolerance)
/// while sum_gamma y_gamma f_gamma = 1.
struct NotSosCertificate {
  std::vector<Monomial> support;
  Eigen::VectorXd y;
  double violation = 0.0;  // largest eigenvalue of sum y_gamma A_gamma
};

struct SosResult {
  SosStatus status = SosStatus::Inconclusive;
  std::optional<SosDecomposition> decomposition;
  std::optional<NotSosCertificate> dual;
  std::string note;
};

/// Gram-matrix SDP test for f in Sigma^2, with factors extracted from the
/// eigendecomposition of the Gram matrix.
SosResult is_sos(const Polynomial& f, const SosOptions& options = {});

/// Same test over a caller-supplied basis (used by the matrix-sos route).
SosResult is_sos_with_basis(const Polynomial& f, GramBasis basis, const SosOptions& options);

enum class SosConvexityStatus { SosConvex, NotSosConvex, Inconclusive };

struct SosConvexityWitness {
  MatrixPolynomial factor;  // F with hessian(f) ~ F^T F
  double residual = 0.0;    // max over entries of l1(hessian(f) - F^T F)
};

struct SosConvexityResult {
  SosConvexityStatus status = SosConvexityStatus::Inconclusive;
  std::optional<SosConvexityWitness> witness;
  /// Point where the Hessian has a negative eigenvalue, when sampling
  /// found one (NotSosConvex only; may be empty for subtler failures).
  std::vector<double> counterexample;
  std::string note;
};

/// Tests whether hessian(f) = F(X)^T F(X) for some polynomial matrix F by
/// testing s(X,Y) = Y^T hessian(f)(X) Y for sos over the basis of monomials
/// with degree exactly one in Y, then reshaping the factors into F.
SosConvexityResult is_sos_convex(const Polynomial& f, const SosOptions& options = {});

/// Drops terms with |coefficient| <= tol * (1 + l1(f)); the pipeline uses
/// this to clear float dust before Gram assembly. Callers account for the
/// discarded mass in their own residuals.
Polynomial drop_small_terms(const Polynomial& f, double tol);

}  // namespace qcert
