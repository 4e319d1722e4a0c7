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

#include <doctest.h>

#include <Eigen/Dense>

#include "qcert/sdp.hpp"
#include "support/sdp_oracle.hpp"

using qcert::SdpOptions;
using qcert::SdpOutcome;
using qcert::SdpProblem;
using qcert::SdpStatus;
using qcert::solve_sdp;

namespace {

Eigen::MatrixXd m1(double a) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = a;
  return m;
}

Eigen::MatrixXd m2(double a, double b, double c) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  return m;
}

void check_feasible_invariants(const SdpProblem& p, const SdpOutcome& out,
                               const SdpOptions& options = {}) {
  REQUIRE(out.status == SdpStatus::Feasible);
  CHECK(out.primal_min_eigenvalue >= -options.eig_tol);
  double scale = 1.0;
  for (double b : p.rhs) scale = std::max(scale, std::abs(b));
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    double v = p.constraints[k].cwiseProduct(out.primal).sum();
    CHECK(std::abs(v - p.rhs[k]) <= options.feas_tol * (1.0 + scale));
  }
}

}  // namespace

TEST_CASE("dim 1 feasibility with a unit trace pin") {
  SdpProblem p(1);
  p.add_constraint(m1(1.0), 1.0);
  SdpOutcome out = solve_sdp(p);
  check_feasible_invariants(p, out);
  CHECK(out.primal(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("dim 1 infeasible negative trace") {
  SdpProblem p(1);
  p.add_constraint(m1(1.0), -1.0);
  SdpOutcome out = solve_sdp(p);
  REQUIRE(out.status == SdpStatus::Infeasible);
  // Farkas: sum y_k A_k <= 0 and b'y = 1.
  CHECK(out.farkas(0) * 1.0 <= 1e-8);
  CHECK(out.farkas(0) * (-1.0) == doctest::Approx(1.0));
}

TEST_CASE("dim 2 constraints forcing an indefinite matrix are infeasible") {
  // Q pinned to [[1,2],[2,1]], eigenvalues 3 and -1.
  SdpProblem p(2);
  p.add_constraint(m2(1, 0, 0), 1.0);
  p.add_constraint(m2(0, 0, 1), 1.0);
  p.add_constraint(m2(0, 1, 0), 4.0);
  SdpOutcome out = solve_sdp(p);
  REQUIRE(out.status == SdpStatus::Infeasible);
  Eigen::MatrixXd z = -out.farkas_slack;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(z, Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues().maxCoeff() <= 1e-6);
  double by = out.farkas(0) + out.farkas(1) + 4.0 * out.farkas(2);
  CHECK(by == doctest::Approx(1.0));
}

TEST_CASE("pure feasibility returns an interior point when one exists") {
  // tr(Q) = 2 over 2x2: the analytic choice is Q = I, min eigenvalue 1.
  SdpProblem p(2);
  p.add_constraint(m2(1, 0, 1), 2.0);
  SdpOutcome out = solve_sdp(p);
  check_feasible_invariants(p, out);
  CHECK(out.primal_min_eigenvalue > 0.5);
}

TEST_CASE("minimization objective") {
  // min Q11 s.t. tr(Q) = 1: optimum 0 at Q = diag(0, 1).
  SdpProblem p(2);
  p.add_constraint(m2(1, 0, 1), 1.0);
  p.objective = m2(1, 0, 0);
  SdpOutcome out = solve_sdp(p);
  check_feasible_invariants(p, out);
  CHECK(out.primal(0, 0) <= 1e-6);
  CHECK(out.primal(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("iteration cap yields Inconclusive, never a wrong status") {
  SdpProblem p(2);
  p.add_constraint(m2(1, 0, 0), 1.0);
  p.add_constraint(m2(0, 0, 1), 1.0);
  p.add_constraint(m2(0, 1, 0), 4.0);
  SdpOptions options;
  options.max_iterations = 0;
  SdpOutcome out = solve_sdp(p, options);
  CHECK(out.status == SdpStatus::Inconclusive);
}

TEST_CASE("asymmetric constraint matrices are rejected") {
  SdpProblem p(2);
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 1, -1, 0;
  p.constraints.push_back(bad);
  p.rhs.push_back(0.0);
  CHECK_THROWS_AS(solve_sdp(p), std::invalid_argument);
}

TEST_CASE("status is invariant under positive rescaling of the data") {
  qcert::Rng rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    SdpProblem p = (trial % 2 == 0) ? qcert::testing::random_feasible_instance(rng, 2)
                                    : qcert::testing::random_infeasible_instance(rng, 2);
    SdpStatus base = solve_sdp(p).status;
    for (double scale : {0.5, 2.0, 10.0}) {
      SdpProblem scaled = p;
      for (auto& a : scaled.constraints) a *= scale;
      for (auto& b : scaled.rhs) b *= scale;
      CHECK(solve_sdp(scaled).status == base);
    }
  }
}

TEST_CASE("solver status matches the brute-force oracle on small problems") {
  qcert::Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    int dim = (trial % 3 == 0) ? 1 : 2;
    bool want_feasible = trial % 2 == 0;
    SdpProblem p = want_feasible ? qcert::testing::random_feasible_instance(rng, dim)
                                 : qcert::testing::random_infeasible_instance(rng, dim);
    bool oracle = qcert::testing::oracle_feasible(p);
    CHECK(oracle == want_feasible);
    SdpOutcome out = solve_sdp(p);
    REQUIRE(out.status != SdpStatus::Inconclusive);
    CHECK((out.status == SdpStatus::Feasible) == oracle);
    ++checked;
  }
  CHECK(checked == 12);
}
