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

#include <cstddef>
#include <vector>

#include "qcert/polynomial.hpp"
#include "qcert/rng.hpp"

namespace qcert {

/// Result of scanning a matrix polynomial's spectrum over sample points:
/// the smallest eigenvalue seen and the index of the point attaining it.
/// Ties resolve to the smallest index, so the result is independent of
/// evaluation order.
struct SpectrumScan {
  double min_eigenvalue = 0.0;
  std::ptrdiff_t argmin = -1;
};

/// Minimum over the sample points of the smallest eigenvalue of
/// sign * M(x). Serial reference implementation.
SpectrumScan min_eigenvalue_scan_serial(const MatrixPolynomial& m, double sign,
                                        const PointSet& points);

/// OpenMP version of min_eigenvalue_scan_serial; returns bit-identical
/// results (same per-point arithmetic, order-independent reduction).
SpectrumScan min_eigenvalue_scan(const MatrixPolynomial& m, double sign,
                                 const PointSet& points);

/// f evaluated at every point. Serial reference implementation.
std::vector<double> evaluate_batch_serial(const Polynomial& f, const PointSet& points);

/// OpenMP version of evaluate_batch_serial; bit-identical output.
std::vector<double> evaluate_batch(const Polynomial& f, const PointSet& points);

/// Convexity screen: samples count Gaussian points of the given scale and
/// scans the Hessian spectrum of f (sign=+1) or of -f (sign=-1, i.e. a
/// concavity screen). Passing means min eigenvalue >= -tol.
struct ScreenOptions {
  int samples = 200;
  double scale = 2.0;
  double tol = 1e-8;
};

struct ScreenReport {
  bool passed = false;
  double min_eigenvalue = 0.0;
  std::vector<double> witness;  // point attaining the minimum (empty if no samples)
};

ScreenReport convexity_screen(const Polynomial& f, Rng rng, const ScreenOptions& options = {});
ScreenReport concavity_screen(const Polynomial& g, Rng rng, const ScreenOptions& options = {});

}  // namespace qcert
