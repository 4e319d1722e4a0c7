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

#include "qcert/polynomial.hpp"
#include "support/oracles.hpp"

using qcert::Monomial;
using qcert::Polynomial;
using qcert::l1_distance;
using qcert::parse_polynomial;

namespace {

Polynomial p(const std::string& text, int nvars) { return parse_polynomial(text, nvars); }

}  // namespace

TEST_CASE("addition basics") {
  CHECK(p("x1+1", 1) + p("x1-1", 1) == p("2*x1", 1));
  Polynomial q = p("3*x1^2 - x1 + 5", 1);
  CHECK(q + Polynomial(1) == q);
  CHECK(p("x1^2", 1) + p("x1^2", 1) == p("2*x1^2", 1));
  CHECK_THROWS_AS(p("x1", 1) + p("x1+x2", 2), std::invalid_argument);
}

TEST_CASE("multiplication basics") {
  CHECK(p("x1+1", 1) * p("x1-1", 1) == p("x1^2-1", 1));
  Polynomial q = p("2*x1^3 - x1", 1);
  CHECK(q * Polynomial::constant(1, 1.0) == q);
  CHECK(p("x1+x2", 2) * p("x1+x2", 2) == p("x1^2+2*x1*x2+x2^2", 2));
  // deg(ab) = deg a + deg b for nonzero inputs
  CHECK(*(p("x1^2+1", 1) * p("x1^3-x1", 1)).degree() == 5);
}

TEST_CASE("gradient examples") {
  CHECK(p("x1^2", 1).gradient()[0] == p("2*x1", 1));
  auto g = p("x1*x2", 2).gradient();
  CHECK(g[0] == p("x2", 2));
  CHECK(g[1] == p("x1", 2));

  // (x-2)^2 -> [2x-4], cross-checked against central differences.
  Polynomial f = p("(x1-2)^2", 1);
  Polynomial df = f.gradient()[0];
  CHECK(df == p("2*x1-4", 1));
  qcert::Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    auto x = qcert::testing::random_point(rng, 1, 2.0);
    double fd = qcert::testing::fd_partial(f, x, 0, 1e-6);
    CHECK(qcert::testing::close_rel(df.evaluate(x), fd, 1e-6));
  }
}

TEST_CASE("hessian examples") {
  CHECK(p("x1^4", 1).hessian().at(0, 0) == p("12*x1^2", 1));

  auto h2 = p("x1^2+x2^2", 2).hessian();
  CHECK(h2.at(0, 0) == p("2", 2));
  CHECK(h2.at(1, 1) == p("2", 2));
  CHECK(h2.at(0, 1).is_zero());

  Polynomial f = p("x1^3*x2", 2);
  auto h = f.hessian();
  CHECK(h.at(0, 0) == p("6*x1*x2", 2));
  CHECK(h.at(0, 1) == p("3*x1^2", 2));
  CHECK(h.at(1, 0) == p("3*x1^2", 2));
  CHECK(h.at(1, 1).is_zero());

  qcert::Rng rng(11);
  for (int i = 0; i < 5; ++i) {
    auto x = qcert::testing::random_point(rng, 2, 1.5);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double fd = qcert::testing::fd_second(f, x, a, b, 1e-4);
        CHECK(qcert::testing::close_rel(h.at(a, b).evaluate(x), fd, 1e-4));
      }
  }
}

TEST_CASE("l1 norm examples") {
  CHECK(Polynomial(1).l1_norm() == 0.0);
  CHECK(p("2*x1-3", 1).l1_norm() == 5.0);
  CHECK(p("1 + x1^4 + x2^4 + x3^4", 3).l1_norm() == 4.0);
}

TEST_CASE("evaluation examples") {
  std::vector<double> two{2.0};
  CHECK(p("x1^2-1", 1).evaluate(two) == 3.0);
  CHECK(p("7", 1).evaluate(two) == 7.0);
  std::vector<double> xy{1.0, 2.0};
  CHECK(p("x1*x2+x2", 2).evaluate(xy) == 4.0);
  CHECK_THROWS_AS(p("x1", 2).evaluate(two), std::invalid_argument);
}

TEST_CASE("degree of the zero polynomial is a distinguished answer") {
  CHECK_FALSE(Polynomial(3).degree().has_value());
  CHECK(*p("5", 3).degree() == 0);
  CHECK(p("x1 - x1", 1).is_zero());
}

TEST_CASE("parsing") {
  Polynomial q = p("2*x1^2 - x2 + 1", 2);
  CHECK(q.coefficient(Monomial::variable(0, 2)) == 2.0);
  CHECK(q.coefficient(Monomial::variable(1)) == -1.0);
  CHECK(q.coefficient(Monomial()) == 1.0);

  CHECK(p("0", 1).is_zero());
  CHECK(p("(x1+1)^2", 1) == p("x1^2+2*x1+1", 1));
  CHECK(p("-1", 1) == Polynomial::constant(1, -1.0));
  CHECK(p(" 1.5e-3 * x1 ", 1).coefficient(Monomial::variable(0)) == 1.5e-3);

  std::vector<std::string> names{"u", "v"};
  Polynomial named = parse_polynomial("u^2 - v", 2, &names);
  CHECK(named == p("x1^2 - x2", 2));

  CHECK_THROWS_AS(p("x1 +", 1), qcert::ParseError);
  CHECK_THROWS_AS(p("x9", 2), qcert::ParseError);
  CHECK_THROWS_AS(p("y1", 2), qcert::ParseError);
  CHECK_THROWS_AS(p("x1^-2", 1), qcert::ParseError);
  try {
    p("x1 + @", 1);
    CHECK(false);
  } catch (const qcert::ParseError& e) {
    CHECK(e.position == 5);
  }
}

TEST_CASE("format/parse round trip") {
  qcert::Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    int nvars = 1 + static_cast<int>(rng.uniform01() * 3.0);
    Polynomial q = qcert::testing::random_polynomial(rng, nvars, 5, 8);
    CHECK(parse_polynomial(q.str(), nvars) == q);
  }
  CHECK(p("0", 2).str() == "0");
  CHECK(p("x1^2*x2 - x2 + 0.5", 2).str() == "x1^2*x2 - x2 + 0.5");
}

TEST_CASE("ring axioms on random triples") {
  qcert::Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    int nvars = 1 + static_cast<int>(rng.uniform01() * 2.0);
    Polynomial a = qcert::testing::random_polynomial(rng, nvars, 4, 6);
    Polynomial b = qcert::testing::random_polynomial(rng, nvars, 4, 6);
    Polynomial c = qcert::testing::random_polynomial(rng, nvars, 4, 6);
    CHECK(l1_distance((a + b) + c, a + (b + c)) <= 1e-12);
    CHECK(l1_distance((a * b) * c, a * (b * c)) <= 1e-12 * (1 + a.l1_norm() * b.l1_norm() * c.l1_norm()));
    CHECK(l1_distance(a * (b + c), a * b + a * c) <= 1e-12 * (1 + a.l1_norm() * (b.l1_norm() + c.l1_norm())));
    CHECK(a + b == b + a);
    CHECK(l1_distance(a * b, b * a) <= 1e-12 * (1 + a.l1_norm() * b.l1_norm()));
  }
}

TEST_CASE("evaluation is a homomorphism") {
  qcert::Rng rng(37);
  for (int i = 0; i < 20; ++i) {
    int nvars = 1 + static_cast<int>(rng.uniform01() * 2.0);
    Polynomial a = qcert::testing::random_polynomial(rng, nvars, 4, 6);
    Polynomial b = qcert::testing::random_polynomial(rng, nvars, 4, 6);
    auto x = qcert::testing::random_point(rng, nvars);
    CHECK(qcert::testing::close_rel((a + b).evaluate(x), a.evaluate(x) + b.evaluate(x), 1e-9));
    CHECK(qcert::testing::close_rel((a * b).evaluate(x), a.evaluate(x) * b.evaluate(x), 1e-9));
  }
}

TEST_CASE("derivatives agree with finite differences at random points") {
  qcert::Rng rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    int nvars = 1 + static_cast<int>(rng.uniform01() * 2.0);
    Polynomial f = qcert::testing::random_polynomial(rng, nvars, 5, 8);
    auto grad = f.gradient();
    auto hess = f.hessian();
    CHECK(hess.is_symmetric());
    for (int i = 0; i < 10; ++i) {
      auto x = qcert::testing::random_point(rng, nvars);
      for (int v = 0; v < nvars; ++v) {
        CHECK(qcert::testing::close_rel(grad[v].evaluate(x),
                                        qcert::testing::fd_partial(f, x, v, 1e-5), 1e-5));
      }
      for (int a = 0; a < nvars; ++a)
        for (int b = a; b < nvars; ++b) {
          CHECK(qcert::testing::close_rel(hess.at(a, b).evaluate(x),
                                          qcert::testing::fd_second(f, x, a, b, 1e-4), 2e-4));
        }
    }
  }
}

TEST_CASE("l1 norm is a norm") {
  qcert::Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    Polynomial a = qcert::testing::random_polynomial(rng, 2, 4, 6);
    Polynomial b = qcert::testing::random_polynomial(rng, 2, 4, 6);
    CHECK((a + b).l1_norm() <= a.l1_norm() + b.l1_norm() + 1e-12);
    double s = rng.uniform(-3.0, 3.0);
    CHECK((a * s).l1_norm() == doctest::Approx(std::abs(s) * a.l1_norm()).epsilon(1e-12));
  }
}

TEST_CASE("matrix polynomials") {
  qcert::MatrixPolynomial f(2, 1, 1);
  f.at(0, 0) = p("x1", 1);
  f.at(1, 0) = p("1", 1);
  auto ftf = f.transpose() * f;
  CHECK(ftf.rows() == 1);
  CHECK(ftf.at(0, 0) == p("x1^2+1", 1));
  CHECK((ftf - ftf).max_entry_l1() == 0.0);
}
