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
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcert {

/// Power product of variables, kept sparse: (variable index, exponent)
/// pairs sorted by variable index, with strictly positive exponents.
class Monomial {
 public:
  using Factor = std::pair<int, int>;  // (variable index, exponent > 0)

  Monomial() = default;
  explicit Monomial(std::vector<Factor> factors);
  static Monomial variable(int var, int exp = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_constant() const { return factors_.empty(); }
  int degree() const;
  int exponent(int var) const;
  int max_var() const { return factors_.empty() ? -1 : factors_.back().first; }

  Monomial operator*(const Monomial& other) const;
  double evaluate(std::span<const double> x) const;

  // d/dx_var: writes the integer factor (the old exponent) to *coeff and
  // returns the reduced monomial; *coeff = 0 when var does not occur.
  Monomial derivative(int var, int* coeff) const;

  std::string str(const std::vector<std::string>* names = nullptr) const;

  bool operator==(const Monomial& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
};

/// Graded lexicographic order: lower total degree first, ties broken
/// lexicographically with x1 ranked above x2 and so on.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class MatrixPolynomial;

/// Sparse multivariate polynomial with double coefficients. Stored terms
/// always have nonzero coefficients, and every variable index is < nvars.
/// Values are immutable in practice: all operations return new polynomials.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GradedLexLess>;

  explicit Polynomial(int nvars);
  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int var);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Total degree; nullopt for the zero polynomial.
  std::optional<int> degree() const;

  double coefficient(const Monomial& m) const;
  Polynomial& add_term(const Monomial& m, double c);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial operator*(double s) const;
  Polynomial operator+(double c) const;
  Polynomial operator-(double c) const;
  Polynomial pow(int k) const;

  Polynomial derivative(int var) const;
  std::vector<Polynomial> gradient() const;
  MatrixPolynomial hessian() const;

  double l1_norm() const;
  double evaluate(std::span<const double> x) const;

  std::string str(const std::vector<std::string>* names = nullptr) const;

  bool operator==(const Polynomial& other) const = default;

 private:
  void check_same_space(const Polynomial& other) const;

  int nvars_ = 1;
  TermMap terms_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

/// l1 norm of a - b; the coefficient-space distance used throughout.
double l1_distance(const Polynomial& a, const Polynomial& b);

/// Dense matrix with polynomial entries (all sharing nvars).
class MatrixPolynomial {
 public:
  MatrixPolynomial(int rows, int cols, int nvars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }

  Polynomial& at(int i, int j);
  const Polynomial& at(int i, int j) const;

  MatrixPolynomial transpose() const;
  MatrixPolynomial operator*(const MatrixPolynomial& other) const;
  MatrixPolynomial operator-(const MatrixPolynomial& other) const;

  bool is_symmetric() const;
  double max_entry_l1() const;

  /// Stacks blocks vertically; all blocks must share cols and nvars.
  static MatrixPolynomial vstack(const std::vector<MatrixPolynomial>& blocks);

 private:
  int rows_, cols_, nvars_;
  std::vector<Polynomial> entries_;  // row-major
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message), position(position) {}
  std::size_t position;
};

/// Parses the polynomial grammar: variables x1..xn (or the provided names),
/// operators + - * ^, parentheses, integer/decimal/scientific literals,
/// ^ only with a nonnegative integer exponent. Whitespace is ignored.
/// Throws ParseError with a byte offset on malformed input.
Polynomial parse_polynomial(std::string_view text, int nvars,
                            const std::vector<std::string>* names = nullptr);

/// Shortest round-trip decimal form of a double ("0.1", "2", "1e-05").
std::string format_double(double value);

}  // namespace qcert
