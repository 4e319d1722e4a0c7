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

#include "qcert/kkt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qcert/parallel.hpp"
#include "qcert/rng.hpp"

namespace qcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

// Cached derivatives of one polynomial.
struct Differentiable {
  Polynomial value;
  std::vector<Polynomial> grad;
  MatrixPolynomial hess;

  explicit Differentiable(const Polynomial& p)
      : value(p), grad(p.gradient()), hess(p.hessian()) {}

  double eval(std::span<const double> x) const { return value.evaluate(x); }

  Eigen::VectorXd gradient_at(std::span<const double> x) const {
    Eigen::VectorXd out(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) out(i) = grad[i].evaluate(x);
    return out;
  }

  Eigen::MatrixXd hessian_at(std::span<const double> x) const {
    const int n = hess.rows();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = hess.at(i, j).evaluate(x);
        out(i, j) = v;
        out(j, i) = v;
      }
    return out;
  }
};

struct StartResult {
  MinimizeStatus status = MinimizeStatus::NewtonFailure;
  Eigen::VectorXd x;
  double fvalue = kInf;
};

}  // namespace

ConcavityCheck check_concavity(const Polynomial& g, int samples, std::uint64_t seed) {
  ScreenOptions options;
  options.samples = samples;
  ScreenReport report = concavity_screen(g, Rng(seed), options);
  return ConcavityCheck{report.passed, report.min_eigenvalue, report.witness};
}

SetValidation validate_set(SemiAlgebraicSet& set, std::uint64_t seed,
                           const ScreenOptions& screen) {
  SetValidation out;
  set.concavity_checked.assign(set.constraints.size(), false);
  Rng rng(seed);
  for (std::size_t j = 0; j < set.constraints.size(); ++j) {
    ScreenReport report = concavity_screen(set.constraints[j], rng.fork(j), screen);
    set.concavity_checked[j] = report.passed;
    if (!report.passed && out.ok) {
      out.ok = false;
      out.failing_constraint = static_cast<int>(j);
      out.witness = report.witness;
      out.message = "constraint " + std::to_string(j + 1) +
                    " failed the concavity screen (min eigenvalue " +
                    format_double(report.min_eigenvalue) + ")";
    }
  }
  if (out.ok && set.slater_point) {
    if (static_cast<int>(set.slater_point->size()) != set.nvars) {
      out.ok = false;
      out.message = "slater_point has wrong dimension";
      return out;
    }
    for (std::size_t j = 0; j < set.constraints.size(); ++j) {
      double v = set.constraints[j].evaluate(*set.slater_point);
      if (!(v > 0)) {
        out.ok = false;
        out.failing_constraint = static_cast<int>(j);
        out.witness = *set.slater_point;
        out.message = "slater_point is not strictly feasible for constraint " +
                      std::to_string(j + 1) + " (value " + format_double(v) + ")";
        return out;
      }
    }
  }
  return out;
}

std::optional<std::vector<double>> find_slater(const SemiAlgebraicSet& set,
                                               const SlaterOptions& options) {
  const int n = set.nvars;
  const std::size_t m = set.constraints.size();
  if (set.slater_point) {
    bool strict = true;
    for (const auto& g : set.constraints)
      if (!(g.evaluate(*set.slater_point) > 0)) strict = false;
    if (strict) return set.slater_point;
  }
  if (m == 0) return std::vector<double>(n, 0.0);

  std::vector<Differentiable> gs;
  gs.reserve(m);
  for (const auto& g : set.constraints) gs.emplace_back(g);

  auto min_g = [&](const Eigen::VectorXd& z) {
    double v = kInf;
    std::span<const double> zs(z.data(), static_cast<std::size_t>(z.size()));
    for (const auto& g : gs) v = std::min(v, g.eval(zs));
    return v;
  };

  // Smoothed max-min: phi_t(z) = -t log sum_j exp(-g_j(z)/t).
  auto phi = [&](const Eigen::VectorXd& z, double t, Eigen::VectorXd* grad) {
    std::span<const double> zs(z.data(), static_cast<std::size_t>(z.size()));
    Eigen::VectorXd vals(m);
    for (std::size_t j = 0; j < m; ++j) vals(j) = -gs[j].eval(zs) / t;
    double shift = vals.maxCoeff();
    Eigen::VectorXd w = (vals.array() - shift).exp();
    double total = w.sum();
    if (grad) {
      grad->setZero(n);
      for (std::size_t j = 0; j < m; ++j) *grad += (w(j) / total) * gs[j].gradient_at(zs);
    }
    return -t * (shift + std::log(total));
  };

  Rng rng(options.seed ^ 0x51a7e2ull);
  struct Candidate {
    double value = -kInf;
    Eigen::VectorXd z;
  };
  std::vector<Candidate> results(options.starts);
  std::vector<Eigen::VectorXd> starts(options.starts);
  for (int s = 0; s < options.starts; ++s) {
    Rng local = rng.fork(s);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    if (s > 0) {
      double scale = (s % 2 == 1) ? 1.0 : 3.0;
      for (int i = 0; i < n; ++i) z(i) = scale * local.gaussian();
    }
    starts[s] = z;
  }

  parallel_for(static_cast<std::size_t>(options.starts), [&](std::size_t s) {
    Eigen::VectorXd z = starts[s];
    const double temps[] = {1.0, 0.3, 0.1, 0.03, 0.01};
    bool good = false;
    for (double t : temps) {
      double step = 1.0;
      int per_temp = std::max(1, options.iterations / 5);
      for (int it = 0; it < per_temp; ++it) {
        Eigen::VectorXd grad;
        double value = phi(z, t, &grad);
        double gn2 = grad.squaredNorm();
        if (gn2 < 1e-18) break;
        double s_try = step;
        bool moved = false;
        while (s_try > 1e-14) {
          Eigen::VectorXd cand = z + s_try * grad;
          if (phi(cand, t, nullptr) > value + 1e-4 * s_try * gn2) {
            z = cand;
            moved = true;
            break;
          }
          s_try *= 0.5;
        }
        if (!moved) break;
        step = std::min(4.0, s_try * 2.0);
        if (min_g(z) >= options.good_enough) {
          good = true;
          break;
        }
      }
      if (good) break;
    }
    results[s] = Candidate{min_g(z), z};
  });

  int best = 0;
  for (int s = 1; s < options.starts; ++s)
    if (results[s].value > results[best].value) best = s;
  if (results[best].value > options.margin) return to_std(results[best].z);
  return std::nullopt;
}

namespace {

// Damped Newton descent on the barrier (or plain objective when mu = 0 and
// there are no constraints). Maintains strict feasibility through the line
// search. Returns false on breakdown.
struct BarrierSolver {
  const Differentiable& f;
  const std::vector<Differentiable>& gs;
  const MinimizeOptions& options;

  // Barrier value; +inf outside the domain.
  double value(const Eigen::VectorXd& x, double mu) const {
    std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    double v = f.eval(xs);
    for (const auto& g : gs) {
      double gv = g.eval(xs);
      if (!(gv > 0)) return kInf;
      v -= mu * std::log(gv);
    }
    return v;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x, double mu) const {
    std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    Eigen::VectorXd grad = f.gradient_at(xs);
    for (const auto& g : gs) grad -= (mu / g.eval(xs)) * g.gradient_at(xs);
    return grad;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x, double mu) const {
    std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    Eigen::MatrixXd h = f.hessian_at(xs);
    for (const auto& g : gs) {
      double gv = g.eval(xs);
      Eigen::VectorXd gg = g.gradient_at(xs);
      h += (mu / (gv * gv)) * gg * gg.transpose();
      h -= (mu / gv) * g.hessian_at(xs);
    }
    return h;
  }

  // Newton iterations at fixed mu. Returns Converged/Unbounded/NewtonFailure.
  MinimizeStatus stage(Eigen::VectorXd& x, double mu, double grad_tol) const {
    const int n = static_cast<int>(x.size());
    for (int it = 0; it < options.newton_iterations; ++it) {
      Eigen::VectorXd grad = gradient(x, mu);
      if (grad.norm() <= grad_tol) return MinimizeStatus::Converged;
      Eigen::MatrixXd h = hessian(x, mu);
      Eigen::VectorXd d;
      double ridge = 0.0;
      while (true) {
        Eigen::MatrixXd hr = h;
        if (ridge > 0) hr.diagonal().array() += ridge;
        Eigen::LLT<Eigen::MatrixXd> llt(hr);
        if (llt.info() == Eigen::Success) {
          d = llt.solve(-grad);
          if (d.dot(grad) < 0) break;
        }
        ridge = (ridge == 0.0) ? 1e-10 * (1.0 + h.norm()) : ridge * 100.0;
        if (ridge > 1e12 * (1.0 + h.norm())) return MinimizeStatus::NewtonFailure;
      }
      double base = value(x, mu);
      double slope = options.armijo_slope * grad.dot(d);
      double t = 1.0;
      bool moved = false;
      while (t > 1e-16) {
        Eigen::VectorXd cand = x + t * d;
        double v = value(cand, mu);
        if (v <= base + t * slope) {
          x = cand;
          moved = true;
          break;
        }
        t *= options.armijo_backtrack;
      }
      if (!moved) {
        // The line search cannot see any further decrease at machine
        // precision; take the best-effort point. The final KKT residual
        // check decides whether the run counts as converged.
        return MinimizeStatus::Converged;
      }
      if (x.norm() > options.divergence_radius) return MinimizeStatus::Unbounded;
      (void)n;
    }
    return MinimizeStatus::Converged;
  }

  StartResult run(Eigen::VectorXd x) const {
    StartResult out;
    if (gs.empty()) {
      std::span<const double> xs0(x.data(), static_cast<std::size_t>(x.size()));
      double scale = 1.0 + f.gradient_at(xs0).norm();
      MinimizeStatus status = stage(x, 0.0, 1e-9 * scale);
      out.status = status;
      out.x = x;
      if (status == MinimizeStatus::Converged) {
        std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
        out.fvalue = f.eval(xs);
      }
      return out;
    }
    double mu = options.mu_initial;
    while (true) {
      // Floor the stage tolerance at the evaluation noise of the gradient;
      // near active constraints the barrier term is quantization-limited.
      std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
      double noise_floor = 1e-8 * (1.0 + f.gradient_at(xs).norm());
      double grad_tol = std::max(0.05 * mu, noise_floor);
      MinimizeStatus status = stage(x, mu, grad_tol);
      if (status != MinimizeStatus::Converged) {
        out.status = status;
        out.x = x;
        return out;
      }
      if (mu <= options.mu_final) break;
      mu = std::max(mu * options.mu_factor, options.mu_final);
    }
    out.status = MinimizeStatus::Converged;
    out.x = x;
    std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    out.fvalue = f.eval(xs);
    return out;
  }
};

std::vector<double> rounded(const Eigen::VectorXd& x) {
  std::vector<double> out(x.size());
  for (int i = 0; i < x.size(); ++i) out[i] = std::round(x(i) * 1e8) / 1e8;
  return out;
}

}  // namespace

MinimizeResult minimize(const Polynomial& f, const SemiAlgebraicSet& set,
                        const MinimizeOptions& options) {
  MinimizeResult result;
  const int n = set.nvars;
  if (f.nvars() != n) throw std::invalid_argument("objective/set variable count mismatch");
  Rng rng(options.seed ^ 0xbadc0ffeull);

  if (options.run_screens) {
    ScreenReport convex = convexity_screen(f, rng.fork(1000), options.screen);
    if (!convex.passed) {
      result.status = MinimizeStatus::ObjectiveNotConvex;
      result.witness = convex.witness;
      result.note = "objective failed the convexity screen (min eigenvalue " +
                    format_double(convex.min_eigenvalue) + ")";
      return result;
    }
    for (std::size_t j = 0; j < set.size(); ++j) {
      ScreenReport concave = concavity_screen(set.constraints[j], rng.fork(2000 + j),
                                              options.screen);
      if (!concave.passed) {
        result.status = MinimizeStatus::ConstraintNotConcave;
        result.failing_constraint = static_cast<int>(j);
        result.witness = concave.witness;
        result.note = "constraint " + std::to_string(j + 1) + " failed the concavity screen";
        return result;
      }
    }
  }

  Eigen::VectorXd interior = Eigen::VectorXd::Zero(n);
  if (!set.constraints.empty()) {
    SlaterOptions slater = options.slater;
    slater.seed = options.seed;
    auto z = find_slater(set, slater);
    if (!z) {
      result.status = MinimizeStatus::NoInteriorFound;
      result.note = "no strictly feasible point found";
      return result;
    }
    interior = to_eigen(*z);
  }

  Differentiable df(f);
  std::vector<Differentiable> gs;
  gs.reserve(set.size());
  for (const auto& g : set.constraints) gs.emplace_back(g);
  BarrierSolver solver{df, gs, options};

  auto strictly_feasible = [&](const Eigen::VectorXd& x) {
    std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    for (const auto& g : gs)
      if (!(g.eval(xs) > 0)) return false;
    return true;
  };

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(interior);
  for (int s = 1; s < options.starts; ++s) {
    Rng local = rng.fork(s);
    Eigen::VectorXd cand = interior;
    double radius = 0.5;
    bool ok = false;
    for (int attempt = 0; attempt < 30 && !ok; ++attempt) {
      for (int i = 0; i < n; ++i) cand(i) = interior(i) + radius * local.gaussian();
      ok = gs.empty() || strictly_feasible(cand);
      radius *= 0.7;
    }
    starts.push_back(ok ? cand : interior);
  }

  std::vector<StartResult> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) { outcomes[s] = solver.run(starts[s]); });

  int best = -1;
  bool any_unbounded = false;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    if (outcomes[s].status == MinimizeStatus::Unbounded) any_unbounded = true;
    if (outcomes[s].status != MinimizeStatus::Converged) continue;
    if (best < 0) {
      best = static_cast<int>(s);
      continue;
    }
    double fb = outcomes[best].fvalue, fs = outcomes[s].fvalue;
    double tie = 1e-9 * (1.0 + std::abs(fb));
    if (fs < fb - tie) {
      best = static_cast<int>(s);
    } else if (std::abs(fs - fb) <= tie &&
               rounded(outcomes[s].x) < rounded(outcomes[best].x)) {
      best = static_cast<int>(s);
    }
  }

  if (best < 0) {
    result.status = any_unbounded ? MinimizeStatus::Unbounded : MinimizeStatus::NewtonFailure;
    result.note = any_unbounded ? "iterates diverged with decreasing objective"
                                : "Newton iterations stalled on every start";
    return result;
  }

  const Eigen::VectorXd& x = outcomes[best].x;
  std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  KktSolution solution;
  solution.xstar = to_std(x);
  const std::size_t m = gs.size();
  solution.lambda.resize(m);
  double mu = gs.empty() ? 0.0 : options.mu_final;
  Eigen::VectorXd stationarity = df.gradient_at(xs);
  double comp = 0.0;
  double min_g = kInf;
  for (std::size_t j = 0; j < m; ++j) {
    double gv = gs[j].eval(xs);
    min_g = std::min(min_g, gv);
    solution.lambda[j] = mu / gv;
    stationarity -= solution.lambda[j] * gs[j].gradient_at(xs);
    comp = std::max(comp, std::abs(solution.lambda[j] * gv));
  }
  solution.stationarity_residual = stationarity.norm();

  // The barrier formula lambda_j = mu / g_j loses digits to the quantization
  // of g_j near active constraints; a least-squares stationarity fit on the
  // active set restores them. Adopted only when it improves the residual.
  if (!gs.empty()) {
    std::vector<int> active;
    double threshold = 1e-5 * (1.0 + x.norm());
    for (std::size_t j = 0; j < m; ++j)
      if (gs[j].eval(xs) <= threshold) active.push_back(static_cast<int>(j));
    if (!active.empty()) {
      const int a = static_cast<int>(active.size());
      Eigen::MatrixXd gmat(n, a);
      for (int c = 0; c < a; ++c) gmat.col(c) = gs[active[c]].gradient_at(xs);
      Eigen::MatrixXd normal = gmat.transpose() * gmat;
      normal.diagonal().array() += 1e-14 * (1.0 + normal.norm());
      Eigen::VectorXd fit = normal.llt().solve(gmat.transpose() * df.gradient_at(xs));
      fit = fit.cwiseMax(0.0);
      std::vector<double> refined = solution.lambda;
      for (int c = 0; c < a; ++c) refined[active[c]] = fit(c);
      Eigen::VectorXd res = df.gradient_at(xs);
      for (std::size_t j = 0; j < m; ++j) res -= refined[j] * gs[j].gradient_at(xs);
      if (res.norm() < solution.stationarity_residual) {
        solution.lambda = std::move(refined);
        solution.stationarity_residual = res.norm();
        comp = 0.0;
        for (std::size_t j = 0; j < m; ++j)
          comp = std::max(comp, std::abs(solution.lambda[j] * gs[j].eval(xs)));
      }
    }
  }
  solution.complementarity_residual = comp;
  solution.min_constraint_value = gs.empty() ? 0.0 : min_g;
  // Report the barrier-gap-corrected value so the Lagrangian stays
  // nonnegative at the iterate: f(x_mu) - f* <= m * mu on the central path.
  solution.fstar = df.eval(xs) - static_cast<double>(m) * mu;

  if (solution.stationarity_residual > options.kkt_tol ||
      solution.complementarity_residual > options.kkt_tol) {
    result.status = MinimizeStatus::NewtonFailure;
    result.note = "KKT residuals exceed tolerance (stationarity " +
                  format_double(solution.stationarity_residual) + ")";
    return result;
  }

  result.status = MinimizeStatus::Converged;
  result.solution = std::move(solution);
  return result;
}

}  // namespace qcert
