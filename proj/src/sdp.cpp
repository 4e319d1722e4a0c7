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

#include "qcert/sdp.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "cone_ipm.hpp"

namespace qcert {

namespace {

void check_symmetric(const Eigen::MatrixXd& a, int dim) {
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument("constraint matrix has wrong dimensions");
  double skew = (a - a.transpose()).lpNorm<Eigen::Infinity>();
  if (skew > 1e-12 * (1.0 + a.lpNorm<Eigen::Infinity>()))
    throw std::invalid_argument("constraint matrix is not symmetric");
}

coneip::Options cone_options(const SdpOptions& options) {
  coneip::Options out;
  out.feas_tol = options.feas_tol;
  out.gap_tol = options.gap_tol;
  out.max_iterations = options.max_iterations;
  out.step_fraction = options.step_fraction;
  return out;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Eigen::VectorXd rhs_vector(const SdpProblem& problem) {
  Eigen::VectorXd b(problem.rhs.size());
  for (std::size_t i = 0; i < problem.rhs.size(); ++i) b(i) = problem.rhs[i];
  return b;
}

SdpOutcome package_feasible(const SdpProblem& problem, const Eigen::MatrixXd& q,
                            const coneip::Result& cone, const SdpOptions& options) {
  SdpOutcome out;
  out.status = SdpStatus::Feasible;
  out.primal = 0.5 * (q + q.transpose());
  out.primal_min_eigenvalue = min_eigenvalue(out.primal);
  double pres = 0.0;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k)
    pres = std::max(pres,
                    std::abs(problem.constraints[k].cwiseProduct(out.primal).sum() -
                             problem.rhs[k]));
  out.residuals.primal_infeasibility = pres;
  out.residuals.dual_infeasibility = cone.dual_residual;
  out.residuals.duality_gap = cone.gap;
  out.residuals.iterations = cone.iterations;
  if (out.primal_min_eigenvalue < -options.eig_tol) {
    out.status = SdpStatus::Inconclusive;
    out.note = "returned matrix failed the eigenvalue tolerance";
  }
  return out;
}

SdpOutcome package_infeasible(const SdpProblem& problem, const Eigen::VectorXd& y,
                              const coneip::Result& cone, const SdpOptions& options) {
  SdpOutcome out;
  const std::size_t m = problem.constraints.size();
  // Normalize to b'y = 1 on the original data and re-verify the sign
  // conditions before reporting.
  double by = 0.0;
  for (std::size_t k = 0; k < m; ++k) by += problem.rhs[k] * y(k);
  if (!(by > 0)) {
    out.status = SdpStatus::Inconclusive;
    out.note = "infeasibility certificate failed revalidation (b'y <= 0)";
    out.residuals.iterations = cone.iterations;
    return out;
  }
  Eigen::VectorXd y_hat = y.head(m) / by;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(problem.dim, problem.dim);
  for (std::size_t k = 0; k < m; ++k) z += y_hat(k) * problem.constraints[k];
  double top = -min_eigenvalue(-z);
  double scale = 1.0 + z.norm();
  if (top > options.feas_tol * scale) {
    out.status = SdpStatus::Inconclusive;
    out.note = "infeasibility certificate failed revalidation (not negative semidefinite)";
    out.residuals.iterations = cone.iterations;
    return out;
  }
  out.status = SdpStatus::Infeasible;
  out.farkas = y_hat;
  out.farkas_slack = -z;
  out.farkas_violation = top;
  out.residuals.iterations = cone.iterations;
  return out;
}

/// Tries to turn a stalled iterate into a verified feasible answer.
/// Writes the iterate as L L^T and runs Gauss-Newton on L against the
/// affine constraints: the matrix stays PSD by construction and the
/// residual converges quadratically when a nearby solution exists. The
/// result is accepted only if it verifiably clears the tolerances.
std::optional<SdpOutcome> rescue_feasible(const SdpProblem& problem, Eigen::MatrixXd q,
                                          const coneip::Result& cone,
                                          const SdpOptions& options) {
  const std::size_t m = problem.constraints.size();
  const int n = problem.dim;
  q = 0.5 * (q + q.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
  double lam_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  if (!(lam_max > 0)) lam_max = 1.0;
  double scale = 1.0;
  for (double b : problem.rhs) scale = std::max(scale, std::abs(b));

  int base_rank = 0;
  for (int i = 0; i < n; ++i)
    if (eig.eigenvalues()(i) > 1e-9 * lam_max) ++base_rank;
  base_rank = std::max(base_rank, 1);

  for (int rank : {base_rank, std::min(base_rank + 2, n), n}) {
    Eigen::MatrixXd l(n, rank);
    for (int c = 0; c < rank; ++c) {
      int idx = n - 1 - c;  // largest eigenvalues first
      double lam = std::max(eig.eigenvalues()(idx), 1e-14 * lam_max);
      l.col(c) = std::sqrt(lam) * eig.eigenvectors().col(idx);
    }
    Eigen::VectorXd resid(m);
    auto compute_residual = [&](const Eigen::MatrixXd& fac) {
      Eigen::MatrixXd g = fac * fac.transpose();
      for (std::size_t k = 0; k < m; ++k)
        resid(k) = problem.rhs[k] - problem.constraints[k].cwiseProduct(g).sum();
      return resid.lpNorm<Eigen::Infinity>();
    };
    double best = compute_residual(l);
    for (int it = 0; it < 20 && best > 1e-13 * scale; ++it) {
      // Least-norm Gauss-Newton step: J_k = vec(2 A_k L).
      std::vector<Eigen::MatrixXd> jrows(m);
      for (std::size_t k = 0; k < m; ++k) jrows[k] = 2.0 * problem.constraints[k] * l;
      Eigen::MatrixXd jjt(m, m);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t kk = k; kk < m; ++kk) {
          double v = jrows[k].cwiseProduct(jrows[kk]).sum();
          jjt(k, kk) = v;
          jjt(kk, k) = v;
        }
      jjt.diagonal().array() += 1e-12 * (1.0 + jjt.norm());
      Eigen::LLT<Eigen::MatrixXd> llt(jjt);
      if (llt.info() != Eigen::Success) break;
      Eigen::VectorXd u = llt.solve(resid);
      Eigen::MatrixXd dl = Eigen::MatrixXd::Zero(n, rank);
      for (std::size_t k = 0; k < m; ++k) dl += u(k) * jrows[k];
      Eigen::MatrixXd candidate = l + dl;
      double value = compute_residual(candidate);
      if (value >= best) break;
      l = candidate;
      best = value;
    }
    if (best <= options.feas_tol * scale) {
      Eigen::MatrixXd out_q = l * l.transpose();
      SdpOutcome out = package_feasible(problem, out_q, cone, options);
      if (out.status == SdpStatus::Feasible &&
          out.residuals.primal_infeasibility <= options.feas_tol * scale) {
        out.note = "accepted after factor refinement of a stalled iterate";
        return out;
      }
    }
  }
  return std::nullopt;
}

/// max t s.t. <A_k, Xt> + t tr(A_k) = b_k, t + slack = cap, Xt >= 0,
/// t >= 0, slack >= 0; the solution maps back as Q = Xt + t I.
coneip::Problem interior_feasibility_problem(const SdpProblem& problem, double cap) {
  coneip::Problem cone;
  cone.dims = {problem.dim, 1, 1};
  const std::size_t m = problem.constraints.size();
  cone.rhs.resize(m + 1);
  for (std::size_t k = 0; k < m; ++k) {
    coneip::BlockMat a = coneip::BlockMat::zeros(cone.dims);
    a.blocks[0] = problem.constraints[k];
    a.blocks[1](0, 0) = problem.constraints[k].trace();
    cone.constraints.push_back(std::move(a));
    cone.rhs(k) = problem.rhs[k];
  }
  coneip::BlockMat cap_row = coneip::BlockMat::zeros(cone.dims);
  cap_row.blocks[1](0, 0) = 1.0;
  cap_row.blocks[2](0, 0) = 1.0;
  cone.constraints.push_back(std::move(cap_row));
  cone.rhs(m) = cap;

  cone.objective = coneip::BlockMat::zeros(cone.dims);
  cone.objective.blocks[1](0, 0) = -1.0;  // maximize t
  return cone;
}

SdpOutcome solve_feasibility(const SdpProblem& problem, const SdpOptions& options) {
  coneip::Problem cone = interior_feasibility_problem(problem, options.interior_cap);
  coneip::Result res = coneip::solve(cone, cone_options(options));
  switch (res.kind) {
    case coneip::ResultKind::Optimal: {
      double t = res.x.blocks[1](0, 0);
      Eigen::MatrixXd q =
          res.x.blocks[0] + t * Eigen::MatrixXd::Identity(problem.dim, problem.dim);
      return package_feasible(problem, q, res, options);
    }
    case coneip::ResultKind::PrimalInfeasible:
      return package_infeasible(problem, res.y, res, options);
    default:
      break;
  }

  if (res.has_last_iterate) {
    double t = res.x.blocks[1](0, 0);
    Eigen::MatrixXd q =
        res.x.blocks[0] + t * Eigen::MatrixXd::Identity(problem.dim, problem.dim);
    if (auto rescued = rescue_feasible(problem, q, res, options)) return *rescued;
  }

  // Stalled. Boundary-only feasible sets starve the auxiliary objective of
  // an interior; retry as a plain feasibility solve before giving up.
  coneip::Problem plain;
  plain.dims = {problem.dim};
  for (const auto& a : problem.constraints) {
    coneip::BlockMat blk = coneip::BlockMat::zeros(plain.dims);
    blk.blocks[0] = a;
    plain.constraints.push_back(std::move(blk));
  }
  plain.rhs = rhs_vector(problem);
  plain.objective = coneip::BlockMat::zeros(plain.dims);
  coneip::Result retry = coneip::solve(plain, cone_options(options));
  switch (retry.kind) {
    case coneip::ResultKind::Optimal:
      return package_feasible(problem, retry.x.blocks[0], retry, options);
    case coneip::ResultKind::PrimalInfeasible:
      return package_infeasible(problem, retry.y, retry, options);
    default: {
      if (retry.has_last_iterate) {
        if (auto rescued = rescue_feasible(problem, retry.x.blocks[0], retry, options))
          return *rescued;
      }
      SdpOutcome out;
      out.status = SdpStatus::Inconclusive;
      out.note = retry.note.empty() ? "solver stalled" : retry.note;
      out.residuals.iterations = res.iterations + retry.iterations;
      return out;
    }
  }
}

}  // namespace

void SdpProblem::add_constraint(const Eigen::MatrixXd& a, double b) {
  constraints.push_back(0.5 * (a + a.transpose()));
  rhs.push_back(b);
}

SdpOutcome solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  if (problem.dim < 1) throw std::invalid_argument("dim must be positive");
  for (const auto& a : problem.constraints) check_symmetric(a, problem.dim);
  bool pure_feasibility =
      problem.objective.size() == 0 || problem.objective.isZero(0.0);
  if (!pure_feasibility) check_symmetric(problem.objective, problem.dim);

  if (pure_feasibility) return solve_feasibility(problem, options);

  coneip::Problem cone;
  cone.dims = {problem.dim};
  for (const auto& a : problem.constraints) {
    coneip::BlockMat blk = coneip::BlockMat::zeros(cone.dims);
    blk.blocks[0] = a;
    cone.constraints.push_back(std::move(blk));
  }
  cone.rhs = rhs_vector(problem);
  cone.objective = coneip::BlockMat::zeros(cone.dims);
  cone.objective.blocks[0] = problem.objective;

  coneip::Result res = coneip::solve(cone, cone_options(options));
  switch (res.kind) {
    case coneip::ResultKind::Optimal:
      return package_feasible(problem, res.x.blocks[0], res, options);
    case coneip::ResultKind::PrimalInfeasible:
      return package_infeasible(problem, res.y, res, options);
    case coneip::ResultKind::DualInfeasible:
      // The objective is unbounded below; the constraint system itself is
      // settled by the interior feasibility formulation.
      return solve_feasibility(problem, options);
    default: {
      SdpOutcome out;
      out.status = SdpStatus::Inconclusive;
      out.note = res.note.empty() ? "solver stalled" : res.note;
      out.residuals.iterations = res.iterations;
      return out;
    }
  }
}

}  // namespace qcert
