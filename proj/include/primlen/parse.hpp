#pragma once

// Recursive-descent parsers for polynomial and Lie expressions.
//
//   poly:  expr   := term (('+' | '-') term)*
//          term   := unary (('*' | '/') unary)*      '/' only by a nonzero constant
//          unary  := '-' unary | power
//          power  := atom ('^' integer)?
//          atom   := integer | x<i> | '(' expr ')'
//
//   lie:   same, with atom additionally '[' expr (',' expr)+ ']' (left-normed),
//          no '^', and products where at most one factor is not a scalar.

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <variant>

#include "primlen/error.hpp"
#include "primlen/field.hpp"
#include "primlen/format.hpp"
#include "primlen/metalie.hpp"
#include "primlen/multipoly.hpp"

namespace primlen {

inline constexpr unsigned long kMaxParsedExponent = 1000;

namespace detail {

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {}

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_end() { return peek() == '\0'; }
  std::size_t position() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

  mpz_class integer() {
    skip();
    const auto start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(std::string(src_.substr(start, pos_ - start)));
  }

  /// "x<i>" with 1 <= i <= arity; returns the 0-based index.
  std::size_t variable(std::size_t arity) {
    skip();
    const auto start = pos_;
    if (pos_ >= src_.size() || src_[pos_] != 'x') fail("expected a variable");
    ++pos_;
    const auto digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = start;
      fail("unknown variable");
    }
    const auto text = src_.substr(digits, pos_ - digits);
    if (text.size() > 9 || text.front() == '0') {
      pos_ = start;
      fail("unknown variable x" + std::string(text));
    }
    const auto i = std::stoul(std::string(text));
    if (i > arity) {
      pos_ = start;
      fail("variable x" + std::to_string(i) + " exceeds the arity " + std::to_string(arity));
    }
    return i - 1;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

class PolyParser {
 public:
  PolyParser(std::string_view src, std::size_t arity, const FieldDescriptor& field)
      : in_(src), arity_(arity), field_(field) {}

  Polynomial run() {
    if (in_.at_end()) in_.fail("empty expression");
    Polynomial f = expr();
    if (!in_.at_end()) in_.fail("unexpected character");
    return f;
  }

 private:
  Polynomial expr() {
    Polynomial f = term();
    for (;;) {
      if (in_.eat('+')) {
        f += term();
      } else if (in_.eat('-')) {
        f -= term();
      } else {
        return f;
      }
    }
  }

  Polynomial term() {
    Polynomial f = unary();
    for (;;) {
      if (in_.eat('*')) {
        f = f * unary();
      } else if (in_.peek() == '/') {
        const auto at = in_.position();
        in_.eat('/');
        const Polynomial g = unary();
        if (g.total_degree() > 0) throw ParseError("division by a non-constant", at);
        if (g.is_zero()) throw ParseError("division by zero", at);
        f *= g.coefficient(Monomial(arity_)).inverse();
      } else {
        return f;
      }
    }
  }

  Polynomial unary() {
    if (in_.eat('-')) return -unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (!in_.eat('^')) return base;
    if (!in_.at_digit()) in_.fail("expected a non-negative integer exponent");
    const auto e = in_.integer();
    if (e > kMaxParsedExponent) in_.fail("exponent too large");
    return pow(base, e.get_ui());
  }

  Polynomial atom() {
    const char c = in_.peek();
    if (c == '(') {
      in_.eat('(');
      Polynomial f = expr();
      in_.expect(')');
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Polynomial::constant(arity_, FieldScalar::from_integer(field_, in_.integer()));
    }
    if (c == 'x') return Polynomial::variable(arity_, field_, in_.variable(arity_));
    if (c == '\0') in_.fail("unexpected end of input");
    in_.fail(std::string("unexpected character '") + c + "'");
  }

  Scanner in_;
  std::size_t arity_;
  FieldDescriptor field_;
};

class LieParser {
 public:
  LieParser(std::string_view src, std::size_t arity, const FieldDescriptor& field)
      : in_(src), arity_(arity), field_(field) {}

  LieElement run() {
    if (in_.at_end()) in_.fail("empty expression");
    const auto start = in_.position();
    Value v = expr();
    if (!in_.at_end()) in_.fail("unexpected character");
    return as_element(v, start);
  }

 private:
  using Value = std::variant<FieldScalar, LieElement>;

  LieElement as_element(const Value& v, std::size_t at) const {
    if (auto* e = std::get_if<LieElement>(&v)) return *e;
    if (std::get<FieldScalar>(v).is_zero()) return LieElement(arity_, field_);
    throw ParseError("a Lie expression cannot contain a nonzero constant term", at);
  }

  Value combine(Value a, const Value& b, bool subtract, std::size_t at) const {
    if (std::holds_alternative<FieldScalar>(a) && std::holds_alternative<FieldScalar>(b)) {
      auto s = std::get<FieldScalar>(a);
      return subtract ? s - std::get<FieldScalar>(b) : s + std::get<FieldScalar>(b);
    }
    LieElement x = as_element(a, at);
    const LieElement y = as_element(b, at);
    return subtract ? x - y : x + y;
  }

  Value expr() {
    auto at = in_.position();
    Value v = term();
    for (;;) {
      if (in_.eat('+')) {
        v = combine(std::move(v), term(), false, at);
      } else if (in_.eat('-')) {
        v = combine(std::move(v), term(), true, at);
      } else {
        return v;
      }
      at = in_.position();
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      const auto at = in_.position();
      if (in_.eat('*')) {
        const Value w = unary();
        if (std::holds_alternative<FieldScalar>(v)) {
          const auto s = std::get<FieldScalar>(v);
          if (auto* ws = std::get_if<FieldScalar>(&w)) {
            v = s * *ws;
          } else {
            v = std::get<LieElement>(w) * s;
          }
        } else if (auto* ws = std::get_if<FieldScalar>(&w)) {
          v = std::get<LieElement>(v) * *ws;
        } else {
          throw ParseError("product of two Lie elements; use a bracket", at);
        }
      } else if (in_.eat('/')) {
        const Value w = unary();
        const auto* ws = std::get_if<FieldScalar>(&w);
        if (ws == nullptr) throw ParseError("division by a non-constant", at);
        if (ws->is_zero()) throw ParseError("division by zero", at);
        if (auto* vs = std::get_if<FieldScalar>(&v)) {
          v = *vs / *ws;
        } else {
          v = std::get<LieElement>(v) * ws->inverse();
        }
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (in_.eat('-')) {
      Value v = unary();
      if (auto* s = std::get_if<FieldScalar>(&v)) return -*s;
      return -std::get<LieElement>(v);
    }
    return atom();
  }

  Value atom() {
    const char c = in_.peek();
    if (c == '(') {
      in_.eat('(');
      Value v = expr();
      in_.expect(')');
      return v;
    }
    if (c == '[') {
      in_.eat('[');
      auto at = in_.position();
      LieElement acc = as_element(expr(), at);
      std::size_t parts = 1;
      while (in_.eat(',')) {
        at = in_.position();
        acc = bracket(acc, as_element(expr(), at));
        ++parts;
      }
      if (parts < 2) in_.fail("a bracket needs at least two entries");
      in_.expect(']');
      return acc;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return FieldScalar::from_integer(field_, in_.integer());
    if (c == 'x') return LieElement::generator(arity_, field_, in_.variable(arity_));
    if (c == '\0') in_.fail("unexpected end of input");
    in_.fail(std::string("unexpected character '") + c + "'");
  }

  Scanner in_;
  std::size_t arity_;
  FieldDescriptor field_;
};

}  // namespace detail

inline Polynomial parse_poly(std::string_view src, std::size_t arity, const FieldDescriptor& field) {
  if (arity == 0) throw InvalidArgument("arity must be positive");
  return detail::PolyParser(src, arity, field).run();
}

inline LieElement parse_lie(std::string_view src, std::size_t arity, const FieldDescriptor& field) {
  if (arity == 0) throw InvalidArgument("arity must be positive");
  return detail::LieParser(src, arity, field).run();
}

}  // namespace primlen
