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

namespace qcert::coneip {

/// Block-diagonal symmetric matrix over a product of PSD blocks.
struct BlockMat {
  std::vector<Eigen::MatrixXd> blocks;

  static BlockMat zeros(const std::vector<int>& dims);
  static BlockMat identity(const std::vector<int>& dims, double scale = 1.0);

  double dot(const BlockMat& other) const;
  double frobenius_norm() const;
  void axpy(double alpha, const BlockMat& other);  // *this += alpha * other
  void scale(double alpha);
  void symmetrize();
  double min_eigenvalue() const;
};

/// min <C,X> s.t. <A_k,X> = b_k, X in the product PSD cone.
struct Problem {
  std::vector<int> dims;
  std::vector<BlockMat> constraints;
  Eigen::VectorXd rhs;
  BlockMat objective;
};

enum class ResultKind {
  Optimal,           // X, y, S returned already scaled by 1/tau
  PrimalInfeasible,  // y is a Farkas certificate: sum y_k A_k <= 0, b'y = 1
  DualInfeasible,    // X is an unboundedness ray: A(X) = 0, X >= 0, <C,X> = -1
  IterationLimit,
  NumericalTrouble,
};

struct Result {
  ResultKind kind = ResultKind::NumericalTrouble;
  BlockMat x;
  Eigen::VectorXd y;
  BlockMat s;
  double primal_residual = 0.0;  // max_k |<A_k,x> - b_k|
  double dual_residual = 0.0;    // ||A'(y) + s - C||_F / (1 + ||C||_F)
  double gap = 0.0;              // <x,s> / (1 + |<C,x>| + |b'y|)
  int iterations = 0;
  std::string note;
  /// On IterationLimit/NumericalTrouble, x/y/s hold the last scaled
  /// iterate so callers can try to salvage a verified answer from it.
  bool has_last_iterate = false;
};

struct Options {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.99;
};

/// Homogeneous self-dual interior-point solve with Nesterov-Todd scaling
/// and a Mehrotra predictor-corrector step. Deterministic; single-threaded.
Result solve(const Problem& problem, const Options& options);

}  // namespace qcert::coneip
