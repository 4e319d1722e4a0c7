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
#include <string>
#include <vector>

namespace qcert {

struct SdpOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  double eig_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.99;
  /// Cap for the auxiliary min-eigenvalue objective used on pure
  /// feasibility problems.
  double interior_cap = 1.0;
};

enum class SdpStatus { Feasible, Infeasible, Inconclusive };

/// Feasibility/minimization over the PSD cone with affine equality
/// constraints <A_k, Q> = b_k. A zero objective means pure feasibility.
struct SdpProblem {
  int dim = 1;
  std::vector<Eigen::MatrixXd> constraints;
  std::vector<double> rhs;
  Eigen::MatrixXd objective;  // zero (or empty) => pure feasibility

  explicit SdpProblem(int dim_) : dim(dim_) {}
  void add_constraint(const Eigen::MatrixXd& a, double b);
};

struct SdpResiduals {
  double primal_infeasibility = 0.0;  // max_k |<A_k,Q> - b_k| for the returned Q
  double dual_infeasibility = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

struct SdpOutcome {
  SdpStatus status = SdpStatus::Inconclusive;

  // Feasible:
  Eigen::MatrixXd primal;
  double primal_min_eigenvalue = 0.0;

  // Infeasible: Farkas-type certificate, normalized so b'y = 1 and
  // sum_k y_k A_k is (numerically) negative semidefinite.
  Eigen::VectorXd farkas;
  Eigen::MatrixXd farkas_slack;  // -sum_k y_k A_k
  double farkas_violation = 0.0;  // largest eigenvalue of sum_k y_k A_k

  SdpResiduals residuals;
  std::string note;
};

/// Solves the problem. Pure feasibility problems are solved with an
/// auxiliary objective maximizing the minimum eigenvalue of Q (capped),
/// so the returned Gram matrix is as interior as possible. Deterministic
/// for identical inputs and options; never silently wrong — an exceeded
/// iteration cap yields Inconclusive.
SdpOutcome solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

}  // namespace qcert
