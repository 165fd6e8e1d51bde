#pragma once

// Text input for polynomials, rational maps and point sets.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary | implicit)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' ['-'] digits)?
//   primary := number | 'z' | '(' expr ')'
//   number  := digits ['.' digits]
//
// Implicit multiplication applies before 'z' and '(' ("2z", "(z+1)(z-1)").
// Sets are "{p1, p2, ...}" (with inf, oo or infinity for the point at
// infinity), "roots(expr)", unions of those joined by '+', or a bare
// polynomial standing for its root set.

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corrdyn/maps.hpp"
#include "corrdyn/polyarith.hpp"

namespace corrdyn {

class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::invalid_argument("parse error at position " + std::to_string(position) + ": " + message),
        position_(position),
        message_(message) {}
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

/// Element of Q(z) kept as a reduced quotient of integer polynomials.
struct RatFunc {
  IntPoly num{0};
  IntPoly den{1};

  bool is_polynomial() const { return den.degree() == 0; }
  bool is_constant() const { return num.degree() <= 0 && den.degree() == 0; }
  Rational constant_value() const { return Rational(num.coeff(0), den.lc()); }
};

namespace detail {

inline RatFunc reduce(IntPoly num, IntPoly den) {
  if (num.is_zero()) return {IntPoly{}, IntPoly{1}};
  const IntPoly g = gcd_poly(num, den);
  num = divexact(num, g);
  den = divexact(den, g);
  if (sgn(den.lc()) < 0) {
    num = num * Integer(-1);
    den = den * Integer(-1);
  }
  return {std::move(num), std::move(den)};
}

inline RatFunc operator+(const RatFunc& a, const RatFunc& b) { return reduce(a.num * b.den + b.num * a.den, a.den * b.den); }
inline RatFunc operator-(const RatFunc& a, const RatFunc& b) { return reduce(a.num * b.den - b.num * a.den, a.den * b.den); }
inline RatFunc operator*(const RatFunc& a, const RatFunc& b) { return reduce(a.num * b.num, a.den * b.den); }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RatFunc parse_full_expression() {
    RatFunc v = expr();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

  AlgSet parse_full_set() {
    skip_ws();
    if (pos_ >= s_.size()) fail("empty input");
    if (s_[pos_] != '{' && !at_word("roots")) {
      const RatFunc v = parse_full_expression();
      if (!v.is_polynomial()) fail_at(0, "a set is given by a polynomial, not a quotient");
      if (v.num.is_zero()) fail_at(0, "the zero polynomial does not define a finite set");
      return AlgSet::from_poly(v.num);
    }
    AlgSet out = set_item();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      if (s_[pos_] != '+') fail("expected '+' between set parts");
      ++pos_;
      out = set_union(out, set_item());
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }
  [[noreturn]] static void fail_at(std::size_t pos, const std::string& msg) { throw ParseError(pos, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_word(std::string_view w) const {
    if (s_.substr(pos_, w.size()) != w) return false;
    const std::size_t e = pos_ + w.size();
    return e >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[e]));
  }

  std::string_view word_at(std::size_t p) const {
    std::size_t e = p;
    while (e < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_')) ++e;
    return s_.substr(p, e - p);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  RatFunc expr() {
    RatFunc v = term();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) return v;
      const char c = s_[pos_];
      if (c == '+') {
        ++pos_;
        v = v + term();
      } else if (c == '-') {
        ++pos_;
        v = v - term();
      } else {
        return v;
      }
    }
  }

  RatFunc term() {
    RatFunc v = unary();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) return v;
      const char c = s_[pos_];
      if (c == '*') {
        ++pos_;
        v = v * unary();
      } else if (c == '/') {
        const std::size_t at = pos_++;
        const RatFunc d = unary();
        if (d.num.is_zero()) fail_at(at, "division by zero");
        v = reduce(v.num * d.den, v.den * d.num);
      } else if (c == '(' || std::isalpha(static_cast<unsigned char>(c))) {
        v = v * power();
      } else {
        return v;
      }
    }
  }

  RatFunc unary() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '-') {
      ++pos_;
      const RatFunc v = unary();
      return {v.num * Integer(-1), v.den};
    }
    if (pos_ < s_.size() && s_[pos_] == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '^') return base;
    ++pos_;
    skip_ws();
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ - start > 5) fail_at(start, "exponent too large");
    const unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
    if (e > 10000) fail_at(start, "exponent too large");
    if (negative) {
      if (base.num.is_zero()) fail_at(start, "division by zero");
      base = {base.den, base.num};
      base = reduce(base.num, base.den);
    }
    return {pow(base.num, static_cast<unsigned>(e)), pow(base.den, static_cast<unsigned>(e))};
  }

  RatFunc primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string_view w = word_at(pos_);
      if (w == "z") {
        ++pos_;
        return {IntPoly{0, 1}, IntPoly{1}};
      }
      fail("non-rational literal '" + std::string(w) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  RatFunc number() {
    const std::size_t start = pos_;
    std::string digits;
    std::size_t frac = 0;
    bool dot = false;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (dot) ++frac;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) fail_at(start, "malformed number");
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])) && word_at(pos_) != "z")
      fail("non-rational literal '" + std::string(s_.substr(start, pos_ - start)) + std::string(word_at(pos_)) + "'");
    const Integer n(digits, 10);
    const Integer d = pow_int(10, frac);
    return reduce(IntPoly::constant(n), IntPoly::constant(d));
  }

  ProjPoint point() {
    skip_ws();
    for (const char* w : {"infinity", "inf", "oo"}) {
      if (at_word(w)) {
        pos_ += std::string_view(w).size();
        return ProjPoint::infinity();
      }
    }
    const std::size_t start = pos_;
    const RatFunc v = expr();
    if (!v.is_constant()) fail_at(start, "set element is not a constant");
    return ProjPoint(v.constant_value());
  }

  AlgSet set_item() {
    skip_ws();
    if (at_word("roots")) {
      pos_ += 5;
      expect('(');
      const std::size_t start = pos_;
      const RatFunc v = expr();
      expect(')');
      if (!v.is_polynomial() || v.num.is_zero()) fail_at(start, "roots() needs a nonzero polynomial");
      return AlgSet::from_poly(v.num);
    }
    expect('{');
    std::vector<ProjPoint> pts;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '}') {
      ++pos_;
      return AlgSet();
    }
    for (;;) {
      pts.push_back(point());
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      break;
    }
    return AlgSet::from_points(pts);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RatFunc parse_expression(std::string_view s) { return detail::Parser(s).parse_full_expression(); }

struct ParsedPoly {
  /// Primitive, with the sign of the expression's leading coefficient.
  IntPoly poly;
  /// poly = clearing_factor * expression.
  Rational clearing_factor;
};

inline ParsedPoly parse_poly(std::string_view s) {
  const RatFunc v = parse_expression(s);
  if (!v.is_polynomial()) throw ParseError(0, "expected a polynomial, got a quotient");
  if (v.num.is_zero()) return {IntPoly{}, Rational(1)};
  const auto [c, p] = content_primitive(v.num);
  Rational f(v.den.lc(), c);
  f.canonicalize();
  return {p, f};
}

/// Polynomial with integer coefficients exactly as written.
inline IntPoly parse_int_poly(std::string_view s) {
  const ParsedPoly p = parse_poly(s);
  if (p.clearing_factor.get_num() != 1) throw ParseError(0, "coefficients are not integers");
  return p.poly * p.clearing_factor.get_den();
}

inline RationalMap parse_map(std::string_view s) {
  const RatFunc v = parse_expression(s);
  try {
    return make_map(v.num, v.den);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

inline AlgSet parse_set(std::string_view s) { return detail::Parser(s).parse_full_set(); }

}  // namespace corrdyn
