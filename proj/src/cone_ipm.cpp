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

#include "cone_ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcert::coneip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Scaling {
  // Per block: R with R^{-1} X R^{-T} = R^T S R = diag(lambda).
  std::vector<Eigen::MatrixXd> r;
  std::vector<Eigen::MatrixXd> r_inv;
  std::vector<Eigen::VectorXd> lambda;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> x_chol;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> s_chol;
};

Eigen::LLT<Eigen::MatrixXd> robust_llt(const Eigen::MatrixXd& m, bool* ok) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    *ok = true;
    return llt;
  }
  double base = 1e-14 * (1.0 + m.norm());
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::MatrixXd jittered = m + base * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) {
      *ok = true;
      return llt;
    }
    base *= 100.0;
  }
  *ok = false;
  return llt;
}

bool compute_scaling(const BlockMat& x, const BlockMat& s, Scaling* scaling) {
  const std::size_t nb = x.blocks.size();
  scaling->r.resize(nb);
  scaling->r_inv.resize(nb);
  scaling->lambda.resize(nb);
  scaling->x_chol.resize(nb);
  scaling->s_chol.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    bool ok = false;
    scaling->x_chol[b] = robust_llt(x.blocks[b], &ok);
    if (!ok) return false;
    scaling->s_chol[b] = robust_llt(s.blocks[b], &ok);
    if (!ok) return false;
    Eigen::MatrixXd lx = scaling->x_chol[b].matrixL();
    Eigen::MatrixXd ls = scaling->s_chol[b].matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ls.transpose() * lx,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd sigma = svd.singularValues();
    if (sigma.minCoeff() < 1e-150) return false;
    Eigen::VectorXd inv_sqrt = sigma.array().sqrt().inverse().matrix();
    scaling->r[b] = lx * svd.matrixV() * inv_sqrt.asDiagonal();
    scaling->r_inv[b] = inv_sqrt.asDiagonal() * svd.matrixU().transpose() * ls.transpose();
    scaling->lambda[b] = sigma;
  }
  return true;
}

// W U W with W = R R^T, applied blockwise.
BlockMat apply_w_both(const Scaling& sc, const BlockMat& u) {
  BlockMat out;
  out.blocks.resize(u.blocks.size());
  for (std::size_t b = 0; b < u.blocks.size(); ++b) {
    const Eigen::MatrixXd& r = sc.r[b];
    out.blocks[b] = r * (r.transpose() * u.blocks[b] * r) * r.transpose();
    out.blocks[b] = 0.5 * (out.blocks[b] + out.blocks[b].transpose()).eval();
  }
  return out;
}

// R (E .* T) R^T with E_ij = 2 / (lambda_i + lambda_j).
BlockMat unscale_complementarity(const Scaling& sc, const std::vector<Eigen::MatrixXd>& t) {
  BlockMat out;
  out.blocks.resize(t.size());
  for (std::size_t b = 0; b < t.size(); ++b) {
    const Eigen::VectorXd& lam = sc.lambda[b];
    const int n = static_cast<int>(lam.size());
    Eigen::MatrixXd scaled(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) scaled(i, j) = 2.0 * t[b](i, j) / (lam(i) + lam(j));
    out.blocks[b] = sc.r[b] * scaled * sc.r[b].transpose();
    out.blocks[b] = 0.5 * (out.blocks[b] + out.blocks[b].transpose()).eval();
  }
  return out;
}

Eigen::VectorXd apply_operator(const std::vector<BlockMat>& constraints, const BlockMat& u) {
  Eigen::VectorXd out(constraints.size());
  for (std::size_t k = 0; k < constraints.size(); ++k) out(k) = constraints[k].dot(u);
  return out;
}

BlockMat apply_adjoint(const std::vector<int>& dims, const std::vector<BlockMat>& constraints,
                       const Eigen::VectorXd& y) {
  BlockMat out = BlockMat::zeros(dims);
  for (std::size_t k = 0; k < constraints.size(); ++k) out.axpy(y(k), constraints[k]);
  return out;
}

// Largest step alpha with M + alpha * D staying PSD, given a factor of M.
double step_to_boundary(const Eigen::LLT<Eigen::MatrixXd>& chol, const Eigen::MatrixXd& d) {
  Eigen::MatrixXd l = chol.matrixL();
  Eigen::MatrixXd y = l.triangularView<Eigen::Lower>().solve(d);
  y = l.triangularView<Eigen::Lower>().solve(y.transpose().eval());
  y = 0.5 * (y + y.transpose()).eval();
  double lo;
  if (y.rows() == 1) {
    lo = y(0, 0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(y, Eigen::EigenvaluesOnly);
    lo = eig.eigenvalues().minCoeff();
  }
  if (lo >= -1e-16) return kInf;
  return -1.0 / lo;
}

struct Direction {
  BlockMat dx, ds;
  Eigen::VectorXd dy;
  double dtau = 0.0, dkappa = 0.0;
};

}  // namespace

BlockMat BlockMat::zeros(const std::vector<int>& dims) {
  BlockMat out;
  out.blocks.reserve(dims.size());
  for (int d : dims) out.blocks.push_back(Eigen::MatrixXd::Zero(d, d));
  return out;
}

BlockMat BlockMat::identity(const std::vector<int>& dims, double scale) {
  BlockMat out;
  out.blocks.reserve(dims.size());
  for (int d : dims) out.blocks.push_back(scale * Eigen::MatrixXd::Identity(d, d));
  return out;
}

double BlockMat::dot(const BlockMat& other) const {
  double out = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    out += blocks[b].cwiseProduct(other.blocks[b]).sum();
  return out;
}

double BlockMat::frobenius_norm() const {
  double out = 0.0;
  for (const auto& m : blocks) out += m.squaredNorm();
  return std::sqrt(out);
}

void BlockMat::axpy(double alpha, const BlockMat& other) {
  for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b] += alpha * other.blocks[b];
}

void BlockMat::scale(double alpha) {
  for (auto& m : blocks) m *= alpha;
}

void BlockMat::symmetrize() {
  for (auto& m : blocks) m = 0.5 * (m + m.transpose()).eval();
}

double BlockMat::min_eigenvalue() const {
  double out = kInf;
  for (const auto& m : blocks) {
    if (m.rows() == 1) {
      out = std::min(out, m(0, 0));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
      out = std::min(out, eig.eigenvalues().minCoeff());
    }
  }
  return out;
}

Result solve(const Problem& problem_in, const Options& options) {
  Result result;
  Problem problem = problem_in;
  if (problem.objective.blocks.size() != problem.dims.size())
    problem.objective = BlockMat::zeros(problem.dims);
  const std::vector<int>& dims = problem.dims;
  const std::size_t m = problem.constraints.size();

  if (m == 0) {
    // Unconstrained over the cone: 0 is optimal iff C is PSD.
    if (problem.objective.min_eigenvalue() >= -options.feas_tol) {
      result.kind = ResultKind::Optimal;
      result.x = BlockMat::zeros(dims);
      result.s = problem.objective;
      result.y = Eigen::VectorXd(0);
      return result;
    }
    result.kind = ResultKind::DualInfeasible;
    result.x = BlockMat::zeros(dims);
    result.note = "objective unbounded below over the cone";
    return result;
  }

  int nu = 0;
  for (int d : dims) nu += d;

  BlockMat x = BlockMat::identity(dims);
  BlockMat s = BlockMat::identity(dims);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  double tau = 1.0, kappa = 1.0;

  const double b_scale = 1.0 + problem.rhs.lpNorm<Eigen::Infinity>();
  const double c_scale = 1.0 + problem.objective.frobenius_norm();
  double a_scale = 1.0;
  for (const auto& a : problem.constraints) a_scale = std::max(a_scale, a.frobenius_norm());

  auto stamp_last_iterate = [&](Result* r) {
    double inv_tau = 1.0 / std::max(tau, 1e-300);
    r->x = x;
    r->x.scale(inv_tau);
    r->y = y * inv_tau;
    r->s = s;
    r->s.scale(inv_tau);
    r->has_last_iterate = true;
  };

  int tiny_steps = 0;
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;

    // Residuals of the self-dual system.
    Eigen::VectorXd res_p = apply_operator(problem.constraints, x) - problem.rhs * tau;
    BlockMat res_d = problem.objective;
    res_d.scale(tau);
    res_d.axpy(-1.0, apply_adjoint(dims, problem.constraints, y));
    res_d.axpy(-1.0, s);
    double res_g = problem.rhs.dot(y) - problem.objective.dot(x) - kappa;
    double mu = (x.dot(s) + tau * kappa) / (nu + 1);

    // Convergence of the scaled iterate.
    {
      double inv_tau = 1.0 / tau;
      Eigen::VectorXd pr = apply_operator(problem.constraints, x) * inv_tau - problem.rhs;
      double pres_abs = pr.lpNorm<Eigen::Infinity>();
      BlockMat dr = apply_adjoint(dims, problem.constraints, y);
      dr.axpy(1.0, s);
      dr.scale(inv_tau);
      dr.axpy(-1.0, problem.objective);
      double dres_rel = dr.frobenius_norm() / c_scale;
      double pobj = problem.objective.dot(x) * inv_tau;
      double dobj = problem.rhs.dot(y) * inv_tau;
      double cgap = x.dot(s) * inv_tau * inv_tau;
      double gap_rel = cgap / (1.0 + std::abs(pobj) + std::abs(dobj));
      if (pres_abs / b_scale <= options.feas_tol && dres_rel <= options.feas_tol &&
          gap_rel <= options.gap_tol) {
        result.kind = ResultKind::Optimal;
        result.x = x;
        result.x.scale(inv_tau);
        result.y = y * inv_tau;
        result.s = s;
        result.s.scale(inv_tau);
        result.primal_residual = pres_abs;
        result.dual_residual = dres_rel;
        result.gap = gap_rel;
        return result;
      }
    }

    // Infeasibility certificates; trusted once the homogeneous iterate is
    // clearly ray-dominated.
    if (tau < 0.1 && kappa > 10.0 * tau) {
      double by = problem.rhs.dot(y);
      if (by > 1e-12) {
        Eigen::VectorXd y_hat = y / by;
        BlockMat z = apply_adjoint(dims, problem.constraints, y_hat);
        BlockMat neg_z = z;
        neg_z.scale(-1.0);
        double top = -neg_z.min_eigenvalue();  // largest eigenvalue of z
        double z_scale = 1.0 + y_hat.lpNorm<1>() * a_scale;
        if (top <= options.feas_tol * z_scale) {
          result.kind = ResultKind::PrimalInfeasible;
          result.y = y_hat;
          result.s = z;
          result.s.scale(-1.0);
          result.primal_residual = top;
          return result;
        }
      }
      double cx = problem.objective.dot(x);
      if (cx < -1e-12) {
        BlockMat ray = x;
        ray.scale(-1.0 / cx);
        Eigen::VectorXd ar = apply_operator(problem.constraints, ray);
        double ray_scale = 1.0 + ray.frobenius_norm() * a_scale;
        if (ar.lpNorm<Eigen::Infinity>() <= options.feas_tol * ray_scale) {
          result.kind = ResultKind::DualInfeasible;
          result.x = ray;
          result.note = "unboundedness ray found";
          return result;
        }
      }
    }

    if (iter == options.max_iterations) {
      result.kind = ResultKind::IterationLimit;
      result.note = "iteration cap reached";
      stamp_last_iterate(&result);
      return result;
    }
    if (mu < 1e-18) {
      result.kind = ResultKind::NumericalTrouble;
      result.note = "mu collapsed without meeting a stopping test";
      stamp_last_iterate(&result);
      return result;
    }

    Scaling sc;
    if (!compute_scaling(x, s, &sc)) {
      result.kind = ResultKind::NumericalTrouble;
      result.note = "Nesterov-Todd scaling failed";
      stamp_last_iterate(&result);
      return result;
    }

    // Schur complement M_kl = <A_k, W A_l W>.
    std::vector<BlockMat> wa(m);
    for (std::size_t l = 0; l < m; ++l) wa[l] = apply_w_both(sc, problem.constraints[l]);
    Eigen::MatrixXd schur(m, m);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = k; l < m; ++l) {
        double v = problem.constraints[k].dot(wa[l]);
        schur(k, l) = v;
        schur(l, k) = v;
      }
    bool schur_ok = false;
    Eigen::LLT<Eigen::MatrixXd> schur_chol = robust_llt(schur, &schur_ok);
    if (!schur_ok) {
      result.kind = ResultKind::NumericalTrouble;
      result.note = "Schur complement factorization failed";
      stamp_last_iterate(&result);
      return result;
    }

    BlockMat wc = apply_w_both(sc, problem.objective);
    Eigen::VectorXd v = apply_operator(problem.constraints, wc);
    double c_wcw = problem.objective.dot(wc);
    Eigen::VectorXd u2 = schur_chol.solve(v + problem.rhs);
    double denom = (problem.rhs - v).dot(u2) + c_wcw + kappa / tau;
    if (!(std::abs(denom) > 1e-300)) {
      result.kind = ResultKind::NumericalTrouble;
      result.note = "singular homogeneous system";
      stamp_last_iterate(&result);
      return result;
    }

    BlockMat w_res_d = apply_w_both(sc, res_d);
    Eigen::VectorXd a_w_res_d = apply_operator(problem.constraints, w_res_d);
    double wc_dot_res_d = wc.dot(res_d);

    auto compute_direction = [&](double gamma, const std::vector<Eigen::MatrixXd>* corr,
                                 double corr_tk) -> Direction {
      const double eta = 1.0 - gamma;
      std::vector<Eigen::MatrixXd> t(dims.size());
      for (std::size_t b = 0; b < dims.size(); ++b) {
        const Eigen::VectorXd& lam = sc.lambda[b];
        t[b] = -lam.cwiseProduct(lam).asDiagonal().toDenseMatrix();
        t[b].diagonal().array() += gamma * mu;
        if (corr) t[b] -= (*corr)[b];
      }
      double t_rhs = gamma * mu - tau * kappa - corr_tk;

      BlockMat g = unscale_complementarity(sc, t);
      Eigen::VectorXd a_g = apply_operator(problem.constraints, g);

      Eigen::VectorXd r1 = -eta * res_p - a_g + eta * a_w_res_d;
      double r2 = -eta * res_g + problem.objective.dot(g) - eta * wc_dot_res_d + t_rhs / tau;

      Eigen::VectorXd u1 = schur_chol.solve(r1);
      Direction dir;
      dir.dtau = (r2 - (problem.rhs - v).dot(u1)) / denom;
      dir.dy = u1 + dir.dtau * u2;

      dir.ds = problem.objective;
      dir.ds.scale(dir.dtau);
      dir.ds.axpy(-1.0, apply_adjoint(dims, problem.constraints, dir.dy));
      dir.ds.axpy(eta, res_d);
      dir.ds.symmetrize();

      dir.dx = g;
      dir.dx.axpy(-1.0, apply_w_both(sc, dir.ds));
      dir.dx.symmetrize();

      dir.dkappa = (t_rhs - kappa * dir.dtau) / tau;
      return dir;
    };

    auto boundary_step = [&](const Direction& dir) -> double {
      double alpha = kInf;
      for (std::size_t b = 0; b < dims.size(); ++b) {
        alpha = std::min(alpha, step_to_boundary(sc.x_chol[b], dir.dx.blocks[b]));
        alpha = std::min(alpha, step_to_boundary(sc.s_chol[b], dir.ds.blocks[b]));
      }
      if (dir.dtau < 0) alpha = std::min(alpha, -tau / dir.dtau);
      if (dir.dkappa < 0) alpha = std::min(alpha, -kappa / dir.dkappa);
      return alpha;
    };

    // Predictor.
    Direction affine = compute_direction(0.0, nullptr, 0.0);
    double alpha_aff = std::min(1.0, boundary_step(affine));
    double xs = x.dot(s);
    double dxs = affine.dx.dot(s) + x.dot(affine.ds);
    double dxdxs = affine.dx.dot(affine.ds);
    double mu_aff = (xs + alpha_aff * dxs + alpha_aff * alpha_aff * dxdxs +
                     (tau + alpha_aff * affine.dtau) * (kappa + alpha_aff * affine.dkappa)) /
                    (nu + 1);
    mu_aff = std::max(mu_aff, 0.0);
    double gamma = std::pow(mu_aff / mu, 3);
    gamma = std::clamp(gamma, 1e-8, 1.0 - 1e-8);

    // Mehrotra corrector in the scaled space.
    std::vector<Eigen::MatrixXd> corr(dims.size());
    for (std::size_t b = 0; b < dims.size(); ++b) {
      Eigen::MatrixXd dxb = sc.r_inv[b] * affine.dx.blocks[b] * sc.r_inv[b].transpose();
      Eigen::MatrixXd dsb =
          sc.r[b].transpose() * affine.ds.blocks[b] * sc.r[b];
      Eigen::MatrixXd prod = dxb * dsb;
      corr[b] = 0.5 * (prod + prod.transpose());
    }
    double corr_tk = affine.dtau * affine.dkappa;

    Direction dir = compute_direction(gamma, &corr, corr_tk);
    double alpha = std::min(1.0, options.step_fraction * boundary_step(dir));
    if (!(alpha > 0) || !std::isfinite(alpha)) {
      result.kind = ResultKind::NumericalTrouble;
      result.note = "step size collapsed";
      stamp_last_iterate(&result);
      return result;
    }
    if (alpha < 1e-7) {
      if (++tiny_steps >= 3) {
        result.kind = ResultKind::NumericalTrouble;
        result.note = "repeated tiny steps";
        stamp_last_iterate(&result);
        return result;
      }
    } else {
      tiny_steps = 0;
    }

    x.axpy(alpha, dir.dx);
    s.axpy(alpha, dir.ds);
    x.symmetrize();
    s.symmetrize();
    y += alpha * dir.dy;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
  }

  result.kind = ResultKind::IterationLimit;
  stamp_last_iterate(&result);
  return result;
}

}  // namespace qcert::coneip
