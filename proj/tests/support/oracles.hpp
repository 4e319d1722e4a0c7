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

// Test-only oracles, independent of the implementation paths they check.

#pragma once

#include <cmath>
#include <vector>

#include "qcert/polynomial.hpp"
#include "qcert/rng.hpp"

namespace qcert::testing {

// Central finite difference df/dx_i at x.
inline double fd_partial(const Polynomial& f, std::vector<double> x, int i, double step) {
  x[i] += step;
  double hi = f.evaluate(x);
  x[i] -= 2 * step;
  double lo = f.evaluate(x);
  return (hi - lo) / (2 * step);
}

// Central finite difference d2f/dx_i dx_j at x.
inline double fd_second(const Polynomial& f, std::vector<double> x, int i, int j, double step) {
  auto at = [&](double di, double dj) {
    std::vector<double> p = x;
    p[i] += di;
    p[j] += dj;
    return f.evaluate(p);
  };
  if (i == j) {
    return (at(step, 0) - 2 * f.evaluate(x) + at(-step, 0)) / (step * step);
  }
  return (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) /
         (4 * step * step);
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline std::vector<double> random_point(Rng& rng, int nvars, double scale = 1.0) {
  std::vector<double> x(nvars);
  for (auto& v : x) v = scale * rng.gaussian();
  return x;
}

// Dense-ish random polynomial with bounded total degree.
inline Polynomial random_polynomial(Rng& rng, int nvars, int degree, int terms) {
  Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    std::vector<Monomial::Factor> factors;
    int remaining = static_cast<int>(rng.uniform01() * (degree + 1));
    for (int v = 0; v < nvars && remaining > 0; ++v) {
      int e = static_cast<int>(rng.uniform01() * (remaining + 1));
      if (e > 0) factors.emplace_back(v, e);
      remaining -= e;
    }
    p.add_term(Monomial(std::move(factors)), rng.uniform(-2.0, 2.0));
  }
  return p;
}

// Explicit sum of squares of random polynomials of degree <= half_degree.
inline Polynomial random_sos(Rng& rng, int nvars, int half_degree, int squares) {
  Polynomial out(nvars);
  for (int s = 0; s < squares; ++s) {
    Polynomial q = random_polynomial(rng, nvars, half_degree, 2 + half_degree * nvars);
    q.add_term(Monomial(), rng.uniform(-1.0, 1.0));
    out = out + q * q;
  }
  return out;
}

}  // namespace qcert::testing
