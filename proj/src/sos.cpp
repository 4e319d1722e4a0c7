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

#include "qcert/sos.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cone_ipm.hpp"
#include "qcert/rng.hpp"
#include "qcert/screens.hpp"

namespace qcert {

namespace {

void enumerate_rec(int nvars, int var, int remaining, std::vector<Monomial::Factor>& acc,
                   std::vector<Monomial>& out) {
  if (var == nvars) {
    out.emplace_back(acc);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    if (e > 0) acc.emplace_back(var, e);
    enumerate_rec(nvars, var + 1, remaining - e, acc, out);
    if (e > 0) acc.pop_back();
  }
}

std::vector<Monomial> monomials_up_to(int nvars, int maxdeg) {
  std::vector<Monomial> out;
  std::vector<Monomial::Factor> acc;
  enumerate_rec(nvars, 0, maxdeg, acc, out);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return GradedLexLess{}(a, b);
  });
  return out;
}

std::vector<int> dense_exponents(const Monomial& m, int nvars) {
  std::vector<int> e(nvars, 0);
  for (const auto& [var, exp] : m.factors()) e[var] = exp;
  return e;
}

/// Exact membership test for points in the convex hull of the support,
/// phrased as a small LP feasibility problem solved by the cone engine.
/// Conservative: candidates are kept unless infeasibility is certified.
class HullMembership {
 public:
  HullMembership(const Polynomial& f, const SdpOptions& sdp) {
    nvars_ = f.nvars();
    for (const auto& [m, c] : f.terms()) support_.push_back(dense_exponents(m, nvars_));
    const std::size_t s = support_.size();
    problem_.dims.assign(s, 1);
    problem_.rhs = Eigen::VectorXd::Zero(nvars_ + 1);
    for (int row = 0; row < nvars_ + 1; ++row) {
      coneip::BlockMat a = coneip::BlockMat::zeros(problem_.dims);
      for (std::size_t i = 0; i < s; ++i)
        a.blocks[i](0, 0) = (row < nvars_) ? static_cast<double>(support_[i][row]) : 1.0;
      problem_.constraints.push_back(std::move(a));
    }
    problem_.objective = coneip::BlockMat::zeros(problem_.dims);
    options_.feas_tol = sdp.feas_tol;
    options_.gap_tol = sdp.gap_tol;
    options_.max_iterations = sdp.max_iterations;
  }

  bool contains(const std::vector<int>& point) {
    // Quick exits: a single support point, or an exact hit.
    for (const auto& alpha : support_)
      if (alpha == point) return true;
    if (support_.size() == 1) return false;
    for (int v = 0; v < nvars_; ++v) problem_.rhs(v) = static_cast<double>(point[v]);
    problem_.rhs(nvars_) = 1.0;
    coneip::Result res = coneip::solve(problem_, options_);
    return res.kind != coneip::ResultKind::PrimalInfeasible;
  }

 private:
  int nvars_;
  std::vector<std::vector<int>> support_;
  coneip::Problem problem_;
  coneip::Options options_;
};

struct SupportBounds {
  std::vector<int> var_min, var_max;
  int deg_min = 0, deg_max = 0;

  explicit SupportBounds(const Polynomial& f)
      : var_min(f.nvars(), 0), var_max(f.nvars(), 0) {
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
      auto e = dense_exponents(m, f.nvars());
      int d = m.degree();
      if (first) {
        var_min = e;
        var_max = e;
        deg_min = deg_max = d;
        first = false;
      } else {
        for (int v = 0; v < f.nvars(); ++v) {
          var_min[v] = std::min(var_min[v], e[v]);
          var_max[v] = std::max(var_max[v], e[v]);
        }
        deg_min = std::min(deg_min, d);
        deg_max = std::max(deg_max, d);
      }
    }
  }

  // Halfspace relaxations of the Newton polytope applied to 2*beta.
  bool admits(const Monomial& beta, int nvars) const {
    auto e = dense_exponents(beta, nvars);
    int d = 2 * beta.degree();
    if (d < deg_min || d > deg_max) return false;
    for (int v = 0; v < nvars; ++v) {
      if (2 * e[v] < var_min[v] || 2 * e[v] > var_max[v]) return false;
    }
    return true;
  }
};

std::vector<Monomial> prune_to_half_polytope(const Polynomial& f,
                                             std::vector<Monomial> candidates,
                                             const SdpOptions& sdp) {
  SupportBounds bounds(f);
  HullMembership hull(f, sdp);
  std::vector<Monomial> kept;
  kept.reserve(candidates.size());
  for (auto& beta : candidates) {
    if (!bounds.admits(beta, f.nvars())) continue;
    auto doubled = dense_exponents(beta, f.nvars());
    for (auto& e : doubled) e *= 2;
    if (hull.contains(doubled)) kept.push_back(std::move(beta));
  }
  return kept;
}

// Removes basis monomials whose squared entry is pinned to zero: when f has
// no coefficient at 2*beta and no other basis pair reaches that product, any
// PSD Gram matrix must vanish at (beta,beta) and hence on the whole row.
// Exact and iterated to a fixpoint; it never changes the sos verdict.
std::vector<Monomial> diagonal_consistency_reduce(const Polynomial& f,
                                                  std::vector<Monomial> basis) {
  bool changed = true;
  while (changed) {
    changed = false;
    const int n = static_cast<int>(basis.size());
    std::map<Monomial, int, GradedLexLess> pair_count;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) pair_count[basis[i] * basis[j]] += 1;
    std::vector<Monomial> kept;
    kept.reserve(basis.size());
    for (const auto& beta : basis) {
      Monomial square = beta * beta;
      if (f.coefficient(square) == 0.0 && pair_count[square] == 1) {
        changed = true;
      } else {
        kept.push_back(beta);
      }
    }
    basis = std::move(kept);
  }
  return basis;
}

}  // namespace

Polynomial drop_small_terms(const Polynomial& f, double tol) {
  double cutoff = tol * (1.0 + f.l1_norm());
  Polynomial out(f.nvars());
  for (const auto& [m, c] : f.terms())
    if (std::abs(c) > cutoff) out.add_term(m, c);
  return out;
}

std::optional<GramBasis> build_basis(const Polynomial& f, bool prune) {
  GramBasis basis;
  if (f.is_zero()) return basis;
  int deg = *f.degree();
  if (deg % 2 != 0) return std::nullopt;
  std::vector<Monomial> candidates = monomials_up_to(f.nvars(), deg / 2);
  if (prune) candidates = prune_to_half_polytope(f, std::move(candidates), SdpOptions{});
  basis.monomials = std::move(candidates);
  return basis;
}

Polynomial SosDecomposition::reexpand(int nvars) const {
  Polynomial out(nvars);
  for (const auto& q : factors) out = out + q * q;
  return out;
}

SosResult is_sos_with_basis(const Polynomial& f, GramBasis basis, const SosOptions& options) {
  SosResult result;
  const int nvars = f.nvars();

  if (f.is_zero()) {
    result.status = SosStatus::Sos;
    SosDecomposition dec;
    dec.gram = Eigen::MatrixXd::Zero(0, 0);
    result.decomposition = std::move(dec);
    return result;
  }

  basis.monomials = diagonal_consistency_reduce(f, std::move(basis.monomials));

  const int n = static_cast<int>(basis.size());
  std::map<Monomial, std::vector<std::pair<int, int>>, GradedLexLess> products;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      products[basis.monomials[i] * basis.monomials[j]].emplace_back(i, j);

  // A coefficient of f outside the product span makes the system
  // unsatisfiable outright; report the separating functional directly.
  for (const auto& [m, c] : f.terms()) {
    if (!products.count(m)) {
      result.status = SosStatus::NotSos;
      NotSosCertificate cert;
      cert.support = {m};
      cert.y = Eigen::VectorXd::Constant(1, 1.0 / c);
      cert.violation = 0.0;
      result.dual = std::move(cert);
      result.note = "support monomial " + m.str() + " is not reachable from the basis";
      return result;
    }
  }

  SdpProblem sdp(n);
  std::vector<Monomial> gammas;
  gammas.reserve(products.size());
  for (const auto& [gamma, pairs] : products) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : pairs) {
      a(i, j) = 1.0;
      a(j, i) = 1.0;
    }
    sdp.add_constraint(a, f.coefficient(gamma));
    gammas.push_back(gamma);
  }

  SdpOutcome outcome = solve_sdp(sdp, options.sdp);
  switch (outcome.status) {
    case SdpStatus::Feasible:
      break;
    case SdpStatus::Infeasible: {
      result.status = SosStatus::NotSos;
      NotSosCertificate cert;
      cert.support = gammas;
      cert.y = outcome.farkas;
      cert.violation = outcome.farkas_violation;
      result.dual = std::move(cert);
      return result;
    }
    case SdpStatus::Inconclusive:
      result.status = SosStatus::Inconclusive;
      result.note = outcome.note;
      return result;
  }

  // Polish the Gram matrix by alternating projections between the affine
  // constraint set and the PSD cone. The affine projection is exact and
  // diagonal because the coefficient matrices of distinct products occupy
  // disjoint entries.
  Eigen::MatrixXd q = outcome.primal;
  auto affine_project = [&](Eigen::MatrixXd& g) {
    std::size_t k = 0;
    for (const auto& [gamma, pairs] : products) {
      double lhs = 0.0;
      double norm2 = 0.0;
      for (auto [i, j] : pairs) {
        lhs += (i == j) ? g(i, i) : 2.0 * g(i, j);
        norm2 += (i == j) ? 1.0 : 2.0;
      }
      double mu = (sdp.rhs[k] - lhs) / norm2;
      for (auto [i, j] : pairs) {
        g(i, j) += mu;
        if (i != j) g(j, i) += mu;
      }
      ++k;
    }
  };
  for (int round = 0; round < 12; ++round) {
    affine_project(q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> step(q);
    if (step.eigenvalues().minCoeff() >= -1e-13) break;
    Eigen::VectorXd clipped = step.eigenvalues().cwiseMax(0.0);
    q = step.eigenvectors() * clipped.asDiagonal() * step.eigenvectors().transpose();
    q = 0.5 * (q + q.transpose()).eval();
  }
  affine_project(q);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
  SosDecomposition dec;
  dec.basis = basis;
  dec.gram = q;
  dec.gram_min_eigenvalue = eig.eigenvalues().minCoeff();

  double lam_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  double cutoff = options.factor_cutoff * lam_max;
  for (int i = n - 1; i >= 0; --i) {  // descending eigenvalue order
    double lam = eig.eigenvalues()(i);
    if (lam <= cutoff || lam <= 0.0) break;
    double root = std::sqrt(lam);
    Polynomial factor(nvars);
    for (int b = 0; b < n; ++b) factor.add_term(basis.monomials[b], root * eig.eigenvectors()(b, i));
    // Canonical sign: positive coefficient on the graded-lex largest monomial.
    if (!factor.is_zero() && factor.terms().rbegin()->second < 0) factor = -factor;
    dec.factors.push_back(std::move(factor));
  }

  dec.residual = l1_distance(f, dec.reexpand(nvars));
  result.status = SosStatus::Sos;
  result.decomposition = std::move(dec);
  return result;
}

SosResult is_sos(const Polynomial& f, const SosOptions& options) {
  std::optional<GramBasis> basis = build_basis(f, options.prune);
  if (!basis) {
    SosResult result;
    result.status = SosStatus::NotSosByDegree;
    result.note = "odd total degree";
    return result;
  }
  return is_sos_with_basis(f, std::move(*basis), options);
}

namespace {

Polynomial lift_to(const Polynomial& p, int nvars) {
  Polynomial out(nvars);
  for (const auto& [m, c] : p.terms()) out.add_term(m, c);
  return out;
}

}  // namespace

SosConvexityResult is_sos_convex(const Polynomial& f, const SosOptions& options) {
  SosConvexityResult result;
  const int n = f.nvars();
  MatrixPolynomial hess = f.hessian();

  bool zero_hessian = true;
  int deg_x = 0;
  for (int i = 0; i < n && zero_hessian; ++i)
    for (int j = 0; j < n; ++j)
      if (!hess.at(i, j).is_zero()) {
        zero_hessian = false;
        break;
      }
  if (zero_hessian) {
    result.status = SosConvexityStatus::SosConvex;
    SosConvexityWitness witness{MatrixPolynomial(1, n, n), 0.0};
    result.witness = std::move(witness);
    return result;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (auto d = hess.at(i, j).degree()) deg_x = std::max(deg_x, *d);

  auto reject_with_counterexample = [&](const std::string& note) {
    result.status = SosConvexityStatus::NotSosConvex;
    result.note = note;
    ScreenReport screen = convexity_screen(f, Rng(options.seed ^ 0x5c0beef5ull));
    if (!screen.passed) result.counterexample = screen.witness;
    return result;
  };

  if (deg_x % 2 != 0) return reject_with_counterexample("Hessian form has odd degree");

  // s(X, Y) = Y^T hessian(f)(X) Y over 2n variables.
  const int total_vars = 2 * n;
  Polynomial s(total_vars);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Polynomial entry = lift_to(hess.at(i, j), total_vars);
      Polynomial yy(total_vars);
      yy.add_term(Monomial::variable(n + i) * Monomial::variable(n + j), i == j ? 1.0 : 2.0);
      s = s + entry * yy;
    }

  // Basis restricted to degree exactly one in Y.
  GramBasis basis;
  {
    std::vector<Monomial> x_part = monomials_up_to(n, deg_x / 2);
    std::vector<Monomial> candidates;
    candidates.reserve(x_part.size() * n);
    for (const auto& beta : x_part)
      for (int i = 0; i < n; ++i) candidates.push_back(beta * Monomial::variable(n + i));
    std::sort(candidates.begin(), candidates.end(),
              [](const Monomial& a, const Monomial& b) { return GradedLexLess{}(a, b); });
    if (options.prune) candidates = prune_to_half_polytope(s, std::move(candidates), options.sdp);
    basis.monomials = std::move(candidates);
  }

  SosResult inner = is_sos_with_basis(s, std::move(basis), options);
  switch (inner.status) {
    case SosStatus::Sos:
      break;
    case SosStatus::NotSos:
    case SosStatus::NotSosByDegree:
      return reject_with_counterexample(inner.note);
    case SosStatus::Inconclusive:
      result.status = SosConvexityStatus::Inconclusive;
      result.note = inner.note;
      return result;
  }

  // Reshape each factor q_k = sum_i F_{k,i}(X) Y_i into the rows of F.
  const auto& factors = inner.decomposition->factors;
  MatrixPolynomial factor(std::max<int>(1, static_cast<int>(factors.size())), n, n);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    for (const auto& [m, c] : factors[k].terms()) {
      int y_var = -1;
      std::vector<Monomial::Factor> x_factors;
      for (const auto& [var, exp] : m.factors()) {
        if (var >= n) {
          y_var = var - n;
        } else {
          x_factors.emplace_back(var, exp);
        }
      }
      factor.at(static_cast<int>(k), y_var).add_term(Monomial(std::move(x_factors)), c);
    }
  }

  double residual = (hess - factor.transpose() * factor).max_entry_l1();
  result.status = SosConvexityStatus::SosConvex;
  result.witness = SosConvexityWitness{std::move(factor), residual};
  return result;
}

}  // namespace qcert
