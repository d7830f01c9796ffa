#pragma once

// Canonical text for polynomials and Lie elements. The output parses back
// to the same value.

#include <string>
#include <vector>

#include "primlen/field.hpp"
#include "primlen/metalie.hpp"
#include "primlen/multipoly.hpp"

namespace primlen {

inline std::string variable_name(std::size_t index) { return "x" + std::to_string(index + 1); }

namespace detail {

// Appends "c*body" with the sign folded into the separator.
inline void append_term(std::string& out, const FieldScalar& c, const std::string& body) {
  const bool neg = c.is_negative();
  const FieldScalar mag = neg ? -c : c;
  if (out.empty()) {
    if (neg) out += "-";
  } else {
    out += neg ? " - " : " + ";
  }
  if (body.empty()) {
    out += mag.to_string();
  } else if (mag.is_one()) {
    out += body;
  } else {
    out += mag.to_string() + "*" + body;
  }
}

}  // namespace detail

inline std::string to_string(const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.arity(); ++i) {
    const auto e = m.exponents[i];
    if (e == 0) continue;
    if (!s.empty()) s += "*";
    s += variable_name(i);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

/// Terms in descending graded lexicographic order, e.g. "x1^2 - 1/2*x2".
inline std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    detail::append_term(out, it->second, to_string(it->first));
  }
  return out;
}

inline std::string to_string(const LieWord& w) {
  if (w.length() == 1) return variable_name(w.indices[0]);
  std::string s = "[";
  for (std::size_t k = 0; k < w.length(); ++k) {
    if (k > 0) s += ",";
    s += variable_name(w.indices[k]);
  }
  return s + "]";
}

/// Linear part first, then longer words, e.g. "x1 + 2*[x2,x1]".
inline std::string to_string(const LieElement& u) {
  if (u.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : u.terms()) detail::append_term(out, c, to_string(w));
  return out;
}

}  // namespace primlen
