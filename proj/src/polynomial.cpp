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

#include "qcert/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace qcert {

namespace {

double pow_int(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Monomial::Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::sort(factors_.begin(), factors_.end());
  std::size_t w = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    auto [var, exp] = factors_[i];
    if (var < 0) throw std::invalid_argument("negative variable index");
    if (exp < 0) throw std::invalid_argument("negative exponent");
    if (exp == 0) continue;
    if (w > 0 && factors_[w - 1].first == var) {
      factors_[w - 1].second += exp;
    } else {
      factors_[w++] = {var, exp};
    }
  }
  factors_.resize(w);
}

Monomial Monomial::variable(int var, int exp) {
  return Monomial({{var, exp}});
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& [var, exp] : factors_) d += exp;
  return d;
}

int Monomial::exponent(int var) const {
  for (const auto& [v, e] : factors_)
    if (v == var) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::vector<Factor> merged;
  merged.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin(), b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      merged.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  Monomial out;
  out.factors_ = std::move(merged);
  return out;
}

double Monomial::evaluate(std::span<const double> x) const {
  double out = 1.0;
  for (const auto& [var, exp] : factors_) out *= pow_int(x[var], exp);
  return out;
}

Monomial Monomial::derivative(int var, int* coeff) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].first == var) {
      *coeff = factors_[i].second;
      Monomial out = *this;
      if (out.factors_[i].second == 1) {
        out.factors_.erase(out.factors_.begin() + i);
      } else {
        out.factors_[i].second -= 1;
      }
      return out;
    }
  }
  *coeff = 0;
  return Monomial();
}

std::string Monomial::str(const std::vector<std::string>* names) const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [var, exp] : factors_) {
    if (!out.empty()) out += "*";
    if (names && var < static_cast<int>(names->size())) {
      out += (*names)[var];
    } else {
      out += "x" + std::to_string(var + 1);
    }
    if (exp > 1) out += "^" + std::to_string(exp);
  }
  return out;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  // Same degree: lexicographic with x1 > x2 > ... . Walk both sparse factor
  // lists; the monomial with the larger exponent at the smallest differing
  // variable is the larger one.
  auto ia = a.factors().begin(), ib = b.factors().begin();
  while (ia != a.factors().end() && ib != b.factors().end()) {
    if (ia->first != ib->first) {
      // The list that mentions the smaller variable has positive exponent
      // there while the other has zero, so it is lex-larger.
      return ia->first > ib->first;
    }
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  // Equal degree with a fully matched prefix forces both lists to end
  // together, so reaching here means the monomials are equal.
  return false;
}

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw std::invalid_argument("nvars must be positive");
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Monomial(), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  if (var < 0 || var >= nvars) throw std::invalid_argument("variable index out of range");
  Polynomial p(nvars);
  p.add_term(Monomial::variable(var), 1.0);
  return p;
}

std::optional<int> Polynomial::degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first.degree();
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

Polynomial& Polynomial::add_term(const Monomial& m, double c) {
  if (m.max_var() >= nvars_) throw std::invalid_argument("monomial variable out of range");
  if (c == 0.0) return *this;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

void Polynomial::check_same_space(const Polynomial& other) const {
  if (nvars_ != other.nvars_)
    throw std::invalid_argument("polynomials have different variable counts");
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  check_same_space(other);
  Polynomial out = *this;
  for (const auto& [m, c] : other.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  check_same_space(other);
  Polynomial out = *this;
  for (const auto& [m, c] : other.terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  check_same_space(other);
  Polynomial out(nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : other.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out(nvars_);
  if (s == 0.0) return out;
  for (const auto& [m, c] : terms_) out.add_term(m, c * s);
  return out;
}

Polynomial Polynomial::operator+(double c) const {
  Polynomial out = *this;
  out.add_term(Monomial(), c);
  return out;
}

Polynomial Polynomial::operator-(double c) const { return *this + (-c); }

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative exponent");
  Polynomial out = Polynomial::constant(nvars_, 1.0);
  for (int i = 0; i < k; ++i) out = out * (*this);
  return out;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    int k = 0;
    Monomial dm = m.derivative(var, &k);
    if (k > 0) out.add_term(dm, c * k);
  }
  return out;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> out;
  out.reserve(nvars_);
  for (int v = 0; v < nvars_; ++v) out.push_back(derivative(v));
  return out;
}

MatrixPolynomial Polynomial::hessian() const {
  MatrixPolynomial h(nvars_, nvars_, nvars_);
  for (int i = 0; i < nvars_; ++i) {
    Polynomial di = derivative(i);
    for (int j = i; j < nvars_; ++j) {
      Polynomial dij = di.derivative(j);
      h.at(i, j) = dij;
      if (j != i) h.at(j, i) = dij;
    }
  }
  return h;
}

double Polynomial::l1_norm() const {
  double out = 0.0;
  for (const auto& [m, c] : terms_) out += std::abs(c);
  return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_)
    throw std::invalid_argument("point dimension does not match nvars");
  double out = 0.0;
  for (const auto& [m, c] : terms_) out += c * m.evaluate(x);
  return out;
}

double l1_distance(const Polynomial& a, const Polynomial& b) {
  return (a - b).l1_norm();
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string Polynomial::str(const std::vector<std::string>* names) const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest graded-lex terms first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    double mag = std::abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += (c < 0) ? " - " : " + ";
    }
    if (m.is_constant()) {
      out += format_double(mag);
    } else if (mag == 1.0) {
      out += m.str(names);
    } else {
      out += format_double(mag) + "*" + m.str(names);
    }
  }
  return out;
}

MatrixPolynomial::MatrixPolynomial(int rows, int cols, int nvars)
    : rows_(rows), cols_(cols), nvars_(nvars) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
  entries_.assign(static_cast<std::size_t>(rows) * cols, Polynomial(nvars));
}

Polynomial& MatrixPolynomial::at(int i, int j) {
  return entries_[static_cast<std::size_t>(i) * cols_ + j];
}

const Polynomial& MatrixPolynomial::at(int i, int j) const {
  return entries_[static_cast<std::size_t>(i) * cols_ + j];
}

MatrixPolynomial MatrixPolynomial::transpose() const {
  MatrixPolynomial out(cols_, rows_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

MatrixPolynomial MatrixPolynomial::operator*(const MatrixPolynomial& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix dimension mismatch");
  if (nvars_ != other.nvars_) throw std::invalid_argument("matrix nvars mismatch");
  MatrixPolynomial out(rows_, other.cols_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < other.cols_; ++j) {
      Polynomial acc(nvars_);
      for (int k = 0; k < cols_; ++k) acc = acc + at(i, k) * other.at(k, j);
      out.at(i, j) = acc;
    }
  return out;
}

MatrixPolynomial MatrixPolynomial::operator-(const MatrixPolynomial& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || nvars_ != other.nvars_)
    throw std::invalid_argument("matrix shape mismatch");
  MatrixPolynomial out(rows_, cols_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) - other.at(i, j);
  return out;
}

bool MatrixPolynomial::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (!(at(i, j) == at(j, i))) return false;
  return true;
}

double MatrixPolynomial::max_entry_l1() const {
  double out = 0.0;
  for (const auto& p : entries_) out = std::max(out, p.l1_norm());
  return out;
}

MatrixPolynomial MatrixPolynomial::vstack(const std::vector<MatrixPolynomial>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("vstack of no blocks");
  int cols = blocks.front().cols();
  int nvars = blocks.front().nvars();
  int rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols || b.nvars() != nvars)
      throw std::invalid_argument("vstack shape mismatch");
    rows += b.rows();
  }
  MatrixPolynomial out(rows, cols, nvars);
  int r = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i, ++r)
      for (int j = 0; j < cols; ++j) out.at(r, j) = b.at(i, j);
  }
  return out;
}

namespace {

// Recursive-descent parser for the polynomial grammar.
class Parser {
 public:
  Parser(std::string_view text, int nvars, const std::vector<std::string>* names)
      : text_(text), nvars_(nvars), names_(names) {}

  Polynomial parse() {
    Polynomial p = parse_expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Polynomial parse_expression() {
    bool negate = false;
    skip_ws();
    if (eat('-')) negate = true;
    else eat('+');
    Polynomial acc = parse_term();
    if (negate) acc = -acc;
    while (true) {
      if (eat('+')) acc = acc + parse_term();
      else if (eat('-')) acc = acc - parse_term();
      else break;
    }
    return acc;
  }

  Polynomial parse_term() {
    Polynomial acc = parse_power();
    while (eat('*')) acc = acc * parse_power();
    return acc;
  }

  Polynomial parse_power() {
    Polynomial base = parse_atom();
    if (eat('^')) {
      skip_ws();
      std::size_t at = pos_;
      int exp = 0;
      bool any = false;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        exp = exp * 10 + (text_[pos_] - '0');
        if (exp > 1000) fail("exponent too large");
        ++pos_;
        any = true;
      }
      if (!any) {
        pos_ = at;
        fail("expected nonnegative integer exponent after '^'");
      }
      return base.pow(exp);
    }
    return base;
  }

  Polynomial parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = parse_expression();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_variable();
    fail("expected number, variable, or '('");
  }

  Polynomial parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    // Optional exponent part of a literal: e or E, optional sign, digits.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // the 'e' belongs to something else; not a valid exponent
      }
    }
    double value = 0.0;
    auto result = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (result.ec != std::errc() || result.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed numeric literal");
    }
    return Polynomial::constant(nvars_, value);
  }

  Polynomial parse_variable() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (names_) {
      for (std::size_t i = 0; i < names_->size(); ++i) {
        if ((*names_)[i] == name) return Polynomial::variable(nvars_, static_cast<int>(i));
      }
    }
    if (name.size() >= 2 && name[0] == 'x') {
      int idx = 0;
      auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (res.ec == std::errc() && res.ptr == name.data() + name.size() && idx >= 1) {
        if (idx > nvars_) {
          pos_ = start;
          fail("variable '" + name + "' exceeds declared variable count");
        }
        return Polynomial::variable(nvars_, idx - 1);
      }
    }
    pos_ = start;
    fail("unknown variable '" + name + "'");
  }

  std::string_view text_;
  int nvars_;
  const std::vector<std::string>* names_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, int nvars,
                            const std::vector<std::string>* names) {
  Parser parser(text, nvars, names);
  return parser.parse();
}

}  // namespace qcert
