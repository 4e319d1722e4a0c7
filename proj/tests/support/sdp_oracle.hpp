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

// Brute-force feasibility oracle for dim <= 2 semidefinite problems: grid
// search over the explicit parameterization of the PSD cone slice. Kept
// independent of the interior-point solver on purpose.

#pragma once

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qcert/parallel.hpp"
#include "qcert/rng.hpp"
#include "qcert/sdp.hpp"

namespace qcert::testing {

// <A, [[a,b],[b,c]]> evaluated the same way everywhere so that generated
// right-hand sides match grid values bit for bit.
inline double constraint_value2(const Eigen::MatrixXd& m, double a, double b, double c) {
  return m(0, 0) * a + 2.0 * m(0, 1) * b + m(1, 1) * c;
}

inline bool oracle_feasible(const SdpProblem& problem, double resolution = 1e-2,
                            double box = 1.2, double slack = 1e-6) {
  const int steps = static_cast<int>(std::round(box / resolution));
  const std::size_t m = problem.constraints.size();
  if (problem.dim == 1) {
    for (int i = 0; i <= steps; ++i) {
      double a = i * resolution;
      bool ok = true;
      for (std::size_t k = 0; k < m && ok; ++k)
        ok = std::abs(problem.constraints[k](0, 0) * a - problem.rhs[k]) <= slack;
      if (ok) return true;
    }
    return false;
  }
  if (problem.dim != 2) throw std::invalid_argument("oracle supports dim <= 2 only");

  std::atomic<bool> found{false};
  parallel_for(static_cast<std::size_t>(steps) + 1, [&](std::size_t ia) {
    if (found.load(std::memory_order_relaxed)) return;
    double a = static_cast<double>(ia) * resolution;  // a >= 0 for PSD
    for (int ib = -steps; ib <= steps; ++ib) {
      double b = ib * resolution;
      if (b * b > a * box) {
        // |b| <= sqrt(a c) <= sqrt(a * box); skip rows that cannot be PSD.
        continue;
      }
      for (int ic = 0; ic <= steps; ++ic) {
        double c = ic * resolution;
        if (a * c - b * b < 0) continue;
        bool ok = true;
        for (std::size_t k = 0; k < m && ok; ++k)
          ok = std::abs(constraint_value2(problem.constraints[k], a, b, c) - problem.rhs[k]) <=
               slack;
        if (ok) {
          found.store(true, std::memory_order_relaxed);
          return;
        }
      }
    }
  });
  return found.load();
}

inline double snap(Rng& rng, double lo, double hi, double resolution = 1e-2) {
  double u = rng.uniform(lo, hi);
  return std::round(u / resolution) * resolution;
}

// Feasible instance whose witness lies exactly on the oracle grid.
inline SdpProblem random_feasible_instance(Rng& rng, int dim) {
  SdpProblem problem(dim);
  if (dim == 1) {
    double a = snap(rng, 0.1, 1.0);
    int m = 1 + static_cast<int>(rng.uniform01() * 2.0);
    for (int k = 0; k < m; ++k) {
      Eigen::MatrixXd mat(1, 1);
      mat(0, 0) = rng.uniform(-1.0, 1.0);
      problem.add_constraint(mat, mat(0, 0) * a);
    }
    return problem;
  }
  double a, b, c;
  do {
    a = snap(rng, 0.3, 1.0);
    c = snap(rng, 0.3, 1.0);
    b = snap(rng, -0.25, 0.25);
  } while (a * c - b * b < 0.02);
  int m = 1 + static_cast<int>(rng.uniform01() * 2.0);
  for (int k = 0; k < m; ++k) {
    Eigen::MatrixXd mat(2, 2);
    mat(0, 0) = rng.uniform(-1.0, 1.0);
    mat(1, 1) = rng.uniform(-1.0, 1.0);
    mat(0, 1) = mat(1, 0) = rng.uniform(-1.0, 1.0);
    problem.add_constraint(mat, constraint_value2(mat, a, b, c));
  }
  return problem;
}

// Infeasible instance carrying a Farkas certificate by construction:
// sum_k y_k A_k = -(I + vv') and sum_k y_k b_k = 1, with ||y||_1 <= 3,
// so every PSD Q violates some constraint by at least 1/3.
inline SdpProblem random_infeasible_instance(Rng& rng, int dim) {
  SdpProblem problem(dim);
  if (dim == 1) {
    double y = rng.uniform(0.3, 1.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
    double p = rng.uniform(0.5, 1.5);
    Eigen::MatrixXd mat(1, 1);
    mat(0, 0) = -p / y;
    problem.add_constraint(mat, 1.0 / y);
    return problem;
  }
  Eigen::VectorXd v(2);
  v << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(2, 2) + v * v.transpose();
  double y1 = rng.uniform(-1.0, 1.0);
  double y2 = rng.uniform(-1.0, 1.0);
  double y3 = rng.uniform(0.3, 1.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
  auto random_sym = [&] {
    Eigen::MatrixXd mat(2, 2);
    mat(0, 0) = rng.uniform(-1.0, 1.0);
    mat(1, 1) = rng.uniform(-1.0, 1.0);
    mat(0, 1) = mat(1, 0) = rng.uniform(-1.0, 1.0);
    return mat;
  };
  Eigen::MatrixXd a1 = random_sym();
  Eigen::MatrixXd a2 = random_sym();
  Eigen::MatrixXd a3 = (-p - y1 * a1 - y2 * a2) / y3;
  double b1 = rng.uniform(-1.0, 1.0);
  double b2 = rng.uniform(-1.0, 1.0);
  double b3 = (1.0 - y1 * b1 - y2 * b2) / y3;
  problem.add_constraint(a1, b1);
  problem.add_constraint(a2, b2);
  problem.add_constraint(a3, b3);
  return problem;
}

}  // namespace qcert::testing
