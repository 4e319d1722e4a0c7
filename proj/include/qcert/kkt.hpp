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

#include "qcert/polynomial.hpp"
#include "qcert/screens.hpp"

namespace qcert {

/// K = {x : g_j(x) >= 0} with concave g_j. The concavity flags record
/// which constraints passed the sampling screen.
struct SemiAlgebraicSet {
  int nvars = 1;
  std::vector<Polynomial> constraints;
  std::optional<std::vector<double>> slater_point;
  std::vector<bool> concavity_checked;

  explicit SemiAlgebraicSet(int nvars_) : nvars(nvars_) {}
  SemiAlgebraicSet(int nvars_, std::vector<Polynomial> g)
      : nvars(nvars_), constraints(std::move(g)) {}
  std::size_t size() const { return constraints.size(); }
};

struct SetValidation {
  bool ok = true;
  int failing_constraint = -1;
  std::vector<double> witness;
  std::string message;
};

/// Screens every g_j for concavity (filling concavity_checked) and checks
/// a user-provided Slater point for strict feasibility.
SetValidation validate_set(SemiAlgebraicSet& set, std::uint64_t seed,
                           const ScreenOptions& screen = {});

struct ConcavityCheck {
  bool concave = false;
  double min_eigenvalue = 0.0;  // of -hessian(g) over the samples
  std::vector<double> witness;  // present when the screen fails
};

/// Sampling screen for Assumption-style concavity; a necessary-condition
/// check, with the definitive certificate available via is_sos_convex(-g).
ConcavityCheck check_concavity(const Polynomial& g, int samples, std::uint64_t seed);

struct SlaterOptions {
  int starts = 16;
  int iterations = 300;
  std::uint64_t seed = 0;
  double margin = 1e-8;        // required min_j g_j(z)
  double good_enough = 1.0;    // stop a start early once this deep inside
};

/// Searches for z with min_j g_j(z) > margin by log-sum-exp smoothed max-min
/// ascent from multiple Gaussian starts. A stored slater_point short-circuits.
/// nullopt = no interior found within the budget (not a proof of emptiness).
std::optional<std::vector<double>> find_slater(const SemiAlgebraicSet& set,
                                               const SlaterOptions& options = {});

struct KktSolution {
  std::vector<double> xstar;
  double fstar = 0.0;
  std::vector<double> lambda;
  double stationarity_residual = 0.0;    // ||grad f - sum lambda_j grad g_j|| at xstar
  double complementarity_residual = 0.0; // max_j |lambda_j g_j(xstar)|
  double min_constraint_value = 0.0;     // min_j g_j(xstar)
};

enum class MinimizeStatus {
  Converged,
  Unbounded,        // iterates diverged with decreasing objective
  NoInteriorFound,
  NewtonFailure,
  ObjectiveNotConvex,
  ConstraintNotConcave,
};

struct MinimizeResult {
  MinimizeStatus status = MinimizeStatus::NewtonFailure;
  std::optional<KktSolution> solution;
  int failing_constraint = -1;   // for ConstraintNotConcave
  std::vector<double> witness;   // screen counterexample, when applicable
  std::string note;
};

struct MinimizeOptions {
  double kkt_tol = 1e-6;
  double mu_initial = 1.0;
  double mu_factor = 0.2;
  double mu_final = 1e-10;
  int starts = 8;
  double divergence_radius = 1e6;
  int newton_iterations = 120;
  double armijo_slope = 0.25;
  double armijo_backtrack = 0.5;
  std::uint64_t seed = 0;
  ScreenOptions screen;
  bool run_screens = true;
  SlaterOptions slater;
};

/// Log-barrier Newton path following for min f over K, with multipliers
/// lambda_j = mu / g_j(x_mu) at the final barrier parameter. Deterministic
/// given options.seed; the multi-start search may run in parallel with ties
/// broken by the lexicographically smallest rounded coordinate vector.
MinimizeResult minimize(const Polynomial& f, const SemiAlgebraicSet& set,
                        const MinimizeOptions& options = {});

}  // namespace qcert
