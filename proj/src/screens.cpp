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

#include "qcert/screens.hpp"

#include <Eigen/Dense>

#include "qcert/parallel.hpp"

namespace qcert {

namespace {

double min_eigenvalue_at(const MatrixPolynomial& m, double sign, std::span<const double> x) {
  const int n = m.rows();
  if (n == 1) return sign * m.at(0, 0).evaluate(x);
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = sign * m.at(i, j).evaluate(x);
      h(i, j) = v;
      h(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

SpectrumScan min_eigenvalue_scan_serial(const MatrixPolynomial& m, double sign,
                                        const PointSet& points) {
  SpectrumScan scan;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double v = min_eigenvalue_at(m, sign, points[i]);
    if (scan.argmin < 0 || v < scan.min_eigenvalue) {
      scan.min_eigenvalue = v;
      scan.argmin = static_cast<std::ptrdiff_t>(i);
    }
  }
  return scan;
}

SpectrumScan min_eigenvalue_scan(const MatrixPolynomial& m, double sign,
                                 const PointSet& points) {
  std::vector<double> values(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    values[i] = min_eigenvalue_at(m, sign, points[i]);
  });
  SpectrumScan scan;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (scan.argmin < 0 || values[i] < scan.min_eigenvalue) {
      scan.min_eigenvalue = values[i];
      scan.argmin = static_cast<std::ptrdiff_t>(i);
    }
  }
  return scan;
}

std::vector<double> evaluate_batch_serial(const Polynomial& f, const PointSet& points) {
  std::vector<double> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) values[i] = f.evaluate(points[i]);
  return values;
}

std::vector<double> evaluate_batch(const Polynomial& f, const PointSet& points) {
  std::vector<double> values(points.size());
  parallel_for(points.size(), [&](std::size_t i) { values[i] = f.evaluate(points[i]); });
  return values;
}

namespace {

ScreenReport hessian_screen(const Polynomial& f, double sign, Rng rng,
                            const ScreenOptions& options) {
  PointSet points = gaussian_points(rng, options.samples, f.nvars(), options.scale);
  SpectrumScan scan = min_eigenvalue_scan(f.hessian(), sign, points);
  ScreenReport report;
  report.min_eigenvalue = scan.min_eigenvalue;
  report.passed = scan.argmin < 0 || scan.min_eigenvalue >= -options.tol;
  if (scan.argmin >= 0 && !report.passed) {
    auto w = points[static_cast<std::size_t>(scan.argmin)];
    report.witness.assign(w.begin(), w.end());
  }
  return report;
}

}  // namespace

ScreenReport convexity_screen(const Polynomial& f, Rng rng, const ScreenOptions& options) {
  return hessian_screen(f, +1.0, rng, options);
}

ScreenReport concavity_screen(const Polynomial& g, Rng rng, const ScreenOptions& options) {
  return hessian_screen(g, -1.0, rng, options);
}

}  // namespace qcert
