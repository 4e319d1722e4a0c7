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

#include <optional>
#include <string>
#include <vector>

#include "qcert/certify.hpp"

namespace qcert {

/// 1 + sum_i x_i^{2r}; convex, with coefficient l1 norm 1 + nvars.
Polynomial theta(int r, int nvars);

/// sum_{k=0}^{r} sum_j x_j^{2k} / k!; the truncated-exponential variant,
/// also convex, converging uniformly on compact sets as the perturbation
/// weight goes to zero.
Polynomial theta_lower(int r, int nvars);

struct DensifyOptions {
  int r_max = 10;
  PerturbationKind kind = PerturbationKind::Theta;
  CertifyOptions certify;
};

enum class ApproximateStatus {
  Succeeded,
  RMaxExhausted,
  Unbounded,
  NoInteriorFound,
  Inconclusive,
  PreconditionFailed,
};

struct ApproximateResult {
  ApproximateStatus status = ApproximateStatus::Inconclusive;
  std::optional<Polynomial> f_eps;  // f + epsilon*(P_{r0} + P_r)
  std::optional<QcCertificate> certificate;
  std::optional<KktSolution> kkt;  // for the perturbed objective
  /// One entry per attempted exponent r: what the sos test said.
  std::vector<std::pair<int, std::string>> trace;
  std::string note;
};

/// Perturbation pathway: f_e0 = f + epsilon * P_{r0} with
/// r0 = floor(deg f / 2) + 1 is minimized over the set (its minimum is
/// attained), and the first exponent r in r0..r_max with
/// L_{f_e0} + epsilon * P_r a sum of squares yields the certificate for
/// f_eps = f + epsilon*(P_{r0} + P_r). Throws std::invalid_argument for
/// epsilon <= 0.
ApproximateResult approximate(const Polynomial& f, const SemiAlgebraicSet& set,
                              double epsilon, const DensifyOptions& options = {});

}  // namespace qcert
