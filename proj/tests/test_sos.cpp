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

#include <cmath>

#include "qcert/sos.hpp"
#include "support/oracles.hpp"

using qcert::GramBasis;
using qcert::Monomial;
using qcert::Polynomial;
using qcert::SosStatus;
using qcert::build_basis;
using qcert::is_sos;
using qcert::is_sos_convex;
using qcert::parse_polynomial;

namespace {

Polynomial p(const std::string& text, int nvars) { return parse_polynomial(text, nvars); }

const char* kMotzkin = "x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1";

void check_dual_certificate(const Polynomial& f, const qcert::NotSosCertificate& cert) {
  // sum_gamma y_gamma A_gamma <= 0 within tolerance and <y, f> = 1.
  CHECK(cert.violation <= 1e-6);
  double pairing = 0.0;
  for (std::size_t k = 0; k < cert.support.size(); ++k)
    pairing += cert.y(k) * f.coefficient(cert.support[k]);
  CHECK(pairing == doctest::Approx(1.0).epsilon(1e-6));
}

}  // namespace

TEST_CASE("basis for x^4+1 holds all monomials up to degree 2") {
  auto basis = build_basis(p("x1^4+1", 1), true);
  REQUIRE(basis.has_value());
  REQUIRE(basis->size() == 3);
  CHECK(basis->monomials[0] == Monomial());
  CHECK(basis->monomials[1] == Monomial::variable(0));
  CHECK(basis->monomials[2] == Monomial::variable(0, 2));
}

TEST_CASE("Newton polytope pruning shrinks the basis of x^2") {
  auto unpruned = build_basis(p("x1^2", 1), false);
  REQUIRE(unpruned.has_value());
  CHECK(unpruned->size() == 2);

  auto pruned = build_basis(p("x1^2", 1), true);
  REQUIRE(pruned.has_value());
  REQUIRE(pruned->size() == 1);
  CHECK(pruned->monomials[0] == Monomial::variable(0));
}

TEST_CASE("odd degree cannot be sos") {
  CHECK_FALSE(build_basis(p("x1^3", 1), true).has_value());
  CHECK(is_sos(p("x1^3", 1)).status == SosStatus::NotSosByDegree);
}

TEST_CASE("perfect square decomposes with its root as the factor") {
  auto res = is_sos(p("x1^2-2*x1+1", 1));
  REQUIRE(res.status == SosStatus::Sos);
  REQUIRE(res.decomposition->factors.size() == 1);
  CHECK(qcert::l1_distance(res.decomposition->factors[0], p("x1-1", 1)) <= 1e-6);
  CHECK(res.decomposition->residual <= 1e-8);
}

TEST_CASE("Motzkin polynomial is rejected with a dual certificate") {
  Polynomial f = p(kMotzkin, 2);
  for (bool prune : {true, false}) {
    qcert::SosOptions options;
    options.prune = prune;
    auto res = is_sos(f, options);
    REQUIRE(res.status == SosStatus::NotSos);
    REQUIRE(res.dual.has_value());
    check_dual_certificate(f, *res.dual);
  }
}

TEST_CASE("negative constant is rejected") {
  auto res = is_sos(p("-1", 1));
  REQUIRE(res.status == SosStatus::NotSos);
  REQUIRE(res.dual.has_value());
  check_dual_certificate(p("-1", 1), *res.dual);
}

TEST_CASE("zero polynomial is trivially sos") {
  auto res = is_sos(Polynomial(2));
  REQUIRE(res.status == SosStatus::Sos);
  CHECK(res.decomposition->factors.empty());
}

TEST_CASE("random explicit sums of squares decompose with small residual") {
  qcert::Rng rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    int nvars = 1 + static_cast<int>(rng.uniform01() * 3.0);
    int half = 1 + static_cast<int>(rng.uniform01() * 3.0);
    Polynomial f = qcert::testing::random_sos(rng, nvars, half, 2 + trial % 3);
    auto res = is_sos(f);
    REQUIRE(res.status == SosStatus::Sos);
    CHECK(res.decomposition->residual <= 1e-6);

    // Spot check the reconstruction pointwise and soundness of the claim.
    Polynomial sigma = res.decomposition->reexpand(nvars);
    int deg = f.degree().value_or(0);
    for (int i = 0; i < 20; ++i) {
      auto x = qcert::testing::random_point(rng, nvars);
      CHECK(qcert::testing::close_rel(sigma.evaluate(x), f.evaluate(x), 1e-6));
      double norm = 0.0;
      for (double v : x) norm += v * v;
      CHECK(f.evaluate(x) >= -1e-6 * (1.0 + std::pow(std::sqrt(norm), deg)));
    }

    // Pruned and unpruned bases must agree on the verdict.
    qcert::SosOptions unpruned;
    unpruned.prune = false;
    CHECK(is_sos(f, unpruned).status == SosStatus::Sos);
  }
}

TEST_CASE("sos-convexity of x^4 with an explicit Hessian factor") {
  auto res = is_sos_convex(p("x1^4", 1));
  REQUIRE(res.status == qcert::SosConvexityStatus::SosConvex);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->residual <= 1e-8);
  // F = [sqrt(12) x] up to sign.
  const auto& factor = res.witness->factor;
  REQUIRE(factor.rows() == 1);
  CHECK(qcert::l1_distance(factor.at(0, 0) * factor.at(0, 0), p("12*x1^2", 1)) <= 1e-7);
}

TEST_CASE("affine polynomials are sos-convex with a zero factor") {
  auto res = is_sos_convex(p("3*x1 - x2 + 7", 2));
  REQUIRE(res.status == qcert::SosConvexityStatus::SosConvex);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->residual == 0.0);
  for (int j = 0; j < 2; ++j) CHECK(res.witness->factor.at(0, j).is_zero());
}

TEST_CASE("the Motzkin polynomial is not sos-convex and a witness point is found") {
  auto res = is_sos_convex(p(kMotzkin, 2));
  REQUIRE(res.status == qcert::SosConvexityStatus::NotSosConvex);
  REQUIRE_FALSE(res.counterexample.empty());
  // The Hessian must really have a negative eigenvalue at the witness.
  auto h = p(kMotzkin, 2).hessian();
  std::vector<double> x = res.counterexample;
  double a = h.at(0, 0).evaluate(x), b = h.at(0, 1).evaluate(x), c = h.at(1, 1).evaluate(x);
  double min_eig = 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  CHECK(min_eig < 0.0);
}

TEST_CASE("sos-convexity witnesses satisfy the quadratic-form inequality") {
  qcert::Rng rng(31337);
  Polynomial f = p("x1^4 + x2^4 + x1^2 + x1*x2 + x2^2", 2);
  auto res = is_sos_convex(f);
  REQUIRE(res.status == qcert::SosConvexityStatus::SosConvex);
  CHECK(res.witness->residual <= 1e-6);
  auto h = f.hessian();
  for (int i = 0; i < 50; ++i) {
    auto x = qcert::testing::random_point(rng, 2, 2.0);
    auto y = qcert::testing::random_point(rng, 2, 1.0);
    double form = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) form += y[a] * h.at(a, b).evaluate(x) * y[b];
    CHECK(form >= -1e-8);
  }
}
