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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace qcert {

/// Deterministic splitmix64-based generator. All randomized screens in the
/// pipeline draw from this so that a seed fixes every sampled decision;
/// transforms are spelled out explicitly instead of using <random>
/// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one value per draw pair).
  double gaussian() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Independent stream derived from this generator's seed and a salt;
  /// does not advance this generator.
  Rng fork(std::uint64_t salt) const {
    Rng child(state_ ^ (salt * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
};

/// Fixed-dimension point collection stored flat, row per point.
class PointSet {
 public:
  PointSet(int dim, std::size_t count) : dim_(dim), data_(count * dim, 0.0) {}

  int dim() const { return dim_; }
  std::size_t size() const { return data_.size() / dim_; }

  std::span<double> operator[](std::size_t i) {
    return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

 private:
  int dim_;
  std::vector<double> data_;
};

/// count points with i.i.d. N(0, scale^2) coordinates.
inline PointSet gaussian_points(Rng& rng, std::size_t count, int dim, double scale) {
  PointSet points(dim, count);
  for (std::size_t i = 0; i < count; ++i)
    for (int j = 0; j < dim; ++j) points[i][j] = scale * rng.gaussian();
  return points;
}

}  // namespace qcert
