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

// The OpenMP kernels must reproduce the serial reference bit for bit:
// per-sample arithmetic is identical and reductions are order-independent.

#include <doctest.h>

#include "qcert/screens.hpp"
#include "support/oracles.hpp"

using qcert::PointSet;
using qcert::Polynomial;
using qcert::Rng;

TEST_CASE("spectrum scan: parallel equals serial reference") {
  Rng rng(5150);
  for (int trial = 0; trial < 6; ++trial) {
    int nvars = 1 + static_cast<int>(rng.uniform01() * 3.0);
    Polynomial f = qcert::testing::random_polynomial(rng, nvars, 6, 12);
    auto h = f.hessian();
    Rng prng = rng.fork(trial);
    PointSet points = qcert::gaussian_points(prng, 257, nvars, 2.0);
    for (double sign : {1.0, -1.0}) {
      auto serial = qcert::min_eigenvalue_scan_serial(h, sign, points);
      auto parallel = qcert::min_eigenvalue_scan(h, sign, points);
      CHECK(serial.min_eigenvalue == parallel.min_eigenvalue);
      CHECK(serial.argmin == parallel.argmin);
    }
  }
}

TEST_CASE("batch evaluation: parallel equals serial reference") {
  Rng rng(860);
  Polynomial f = qcert::testing::random_polynomial(rng, 3, 7, 25);
  PointSet points = qcert::gaussian_points(rng, 1031, 3, 1.3);
  auto serial = qcert::evaluate_batch_serial(f, points);
  auto parallel = qcert::evaluate_batch(f, points);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("screens report deterministic witnesses") {
  Rng rng(99);
  Polynomial f = qcert::parse_polynomial("x1^3", 1);
  auto a = qcert::concavity_screen(f, Rng(42));
  auto b = qcert::concavity_screen(f, Rng(42));
  CHECK_FALSE(a.passed);
  REQUIRE(a.witness.size() == 1);
  CHECK(a.witness == b.witness);
  CHECK(a.min_eigenvalue == b.min_eigenvalue);

  // g = 1 - x^2 is concave, affine polynomials are trivially so.
  CHECK(qcert::concavity_screen(qcert::parse_polynomial("1 - x1^2", 1), Rng(1)).passed);
  CHECK(qcert::concavity_screen(qcert::parse_polynomial("2*x1 - 3", 1), Rng(1)).passed);
  CHECK(qcert::convexity_screen(qcert::parse_polynomial("x1^4 + x2^2", 2), Rng(1)).passed);
  (void)rng;
}
