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

// Compares the serial reference kernels against their OpenMP versions and
// reports timings. Not a correctness test (the test suite asserts equality);
// this is for eyeballing parallel speedup on a given machine.

#include <chrono>
#include <cstdio>
#include <vector>

#include "qcert/parallel.hpp"
#include "qcert/polynomial.hpp"
#include "qcert/rng.hpp"
#include "qcert/screens.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

qcert::Polynomial random_polynomial(qcert::Rng& rng, int nvars, int degree, int terms) {
  qcert::Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    std::vector<qcert::Monomial::Factor> factors;
    int remaining = degree;
    for (int v = 0; v < nvars; ++v) {
      int e = static_cast<int>(rng.uniform01() * (remaining + 1));
      if (e > 0) factors.emplace_back(v, e);
      remaining -= e;
    }
    p.add_term(qcert::Monomial(std::move(factors)), rng.uniform(-1.0, 1.0));
  }
  return p;
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto start = Clock::now();
    f();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads: %d (OpenMP %s)\n\n", qcert::thread_count(),
              qcert::openmp_enabled() ? "on" : "off");
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "parallel", "speedup");

  qcert::Rng rng(12345);

  {
    qcert::Polynomial f = random_polynomial(rng, 3, 6, 40);
    qcert::MatrixPolynomial h = f.hessian();
    qcert::PointSet points = qcert::gaussian_points(rng, 20000, 3, 2.0);
    double ts = time_best_of(3, [&] { (void)qcert::min_eigenvalue_scan_serial(h, 1.0, points); });
    double tp = time_best_of(3, [&] { (void)qcert::min_eigenvalue_scan(h, 1.0, points); });
    std::printf("%-34s %10.4f %10.4f %8.2fx\n", "hessian spectrum scan (20k pts)", ts, tp,
                ts / tp);
  }

  {
    qcert::Polynomial f = random_polynomial(rng, 4, 8, 80);
    qcert::PointSet points = qcert::gaussian_points(rng, 400000, 4, 1.5);
    double ts = time_best_of(3, [&] { (void)qcert::evaluate_batch_serial(f, points); });
    double tp = time_best_of(3, [&] { (void)qcert::evaluate_batch(f, points); });
    std::printf("%-34s %10.4f %10.4f %8.2fx\n", "polynomial batch eval (400k pts)", ts, tp,
                ts / tp);
  }

  return 0;
}
