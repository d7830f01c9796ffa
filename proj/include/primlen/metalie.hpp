#pragma once

// Free metabelian Lie algebra on x_1..x_d over a FieldScalar.
//
// Basis: the generators and the left-normed words
//     [x_{i_1}, x_{i_2}, ..., x_{i_n}],  n >= 2,  i_1 > i_2 <= i_3 <= ... <= i_n.
// Brackets of two commutators vanish, and on the commutator ideal the
// operators ad x_i commute, which is what makes the tail sortable.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "primlen/error.hpp"
#include "primlen/field.hpp"
#include "primlen/linalg.hpp"

namespace primlen {

inline constexpr std::size_t kDefaultDegreeCap = 12;

namespace detail {

inline std::size_t initial_degree_cap() {
  const char* env = std::getenv("PRIMLEN_DEGREE_CAP");
  if (env == nullptr || *env == '\0') return kDefaultDegreeCap;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0) return kDefaultDegreeCap;  // the CLI reports bad values
  return v;
}

inline std::atomic<std::size_t>& degree_cap_slot() {
  static std::atomic<std::size_t> cap{initial_degree_cap()};
  return cap;
}

}  // namespace detail

/// Longest word any Lie operation may produce. PRIMLEN_DEGREE_CAP sets the
/// initial value.
inline std::size_t degree_cap() { return detail::degree_cap_slot().load(); }
inline void set_degree_cap(std::size_t cap) {
  if (cap == 0) throw InvalidArgument("degree cap must be positive");
  detail::degree_cap_slot().store(cap);
}

/// Left-normed word; indices are 0-based.
struct LieWord {
  std::vector<std::uint32_t> indices;

  LieWord() = default;
  explicit LieWord(std::vector<std::uint32_t> i) : indices(std::move(i)) {}

  std::size_t length() const noexcept { return indices.size(); }

  bool is_normal() const {
    if (indices.empty()) return false;
    if (indices.size() == 1) return true;
    if (indices[0] <= indices[1]) return false;
    for (std::size_t k = 2; k < indices.size(); ++k) {
      if (indices[k] < indices[k - 1]) return false;
    }
    return true;
  }

  friend bool operator==(const LieWord&, const LieWord&) = default;
};

/// Shorter words first, then lexicographic.
struct LieWordLess {
  bool operator()(const LieWord& a, const LieWord& b) const noexcept {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.indices < b.indices;
  }
};

class LieElement {
 public:
  using Terms = std::map<LieWord, FieldScalar, LieWordLess>;

  LieElement() = default;
  LieElement(std::size_t arity, const FieldDescriptor& field) : arity_(arity), field_(field) {}

  static LieElement generator(std::size_t arity, const FieldDescriptor& field, std::size_t index) {
    if (index >= arity) throw InvalidArgument("generator index out of range");
    LieElement e(arity, field);
    e.terms_.emplace(LieWord({static_cast<std::uint32_t>(index)}), FieldScalar::one(field));
    return e;
  }

  std::size_t arity() const noexcept { return arity_; }
  const FieldDescriptor& field() const noexcept { return field_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Longest word, 0 for the zero element.
  std::size_t degree() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first.length(); }

  FieldScalar coefficient(const LieWord& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? FieldScalar::zero(field_) : it->second;
  }

  FieldScalar linear_coefficient(std::size_t index) const {
    return coefficient(LieWord({static_cast<std::uint32_t>(index)}));
  }

  bool has_linear_part() const noexcept {
    return !terms_.empty() && terms_.begin()->first.length() == 1;
  }

  bool uses_generator(std::size_t index) const {
    for (const auto& [w, c] : terms_) {
      if (std::find(w.indices.begin(), w.indices.end(), index) != w.indices.end()) return true;
    }
    return false;
  }

  /// Adds c·w for a word already in normal form.
  void add_normal(const LieWord& w, const FieldScalar& c) {
    check_word(w);
    if (!w.is_normal()) throw InvalidArgument("word is not in normal form");
    add_unchecked(w, c);
  }

  /// Adds c·w for an arbitrary left-normed word.
  void add_word(const std::vector<std::uint32_t>& indices, const FieldScalar& c);

  LieElement operator-() const {
    LieElement out = *this;
    for (auto& [w, c] : out.terms_) c = -c;
    return out;
  }

  LieElement& operator+=(const LieElement& o) {
    check(o);
    for (const auto& [w, c] : o.terms_) add_unchecked(w, c);
    return *this;
  }

  LieElement& operator-=(const LieElement& o) {
    check(o);
    for (const auto& [w, c] : o.terms_) add_unchecked(w, -c);
    return *this;
  }

  LieElement& operator*=(const FieldScalar& s) {
    if (!(s.field() == field_)) throw Mismatch("scalar field differs from Lie element field");
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
  friend LieElement operator*(LieElement a, const FieldScalar& s) { return a *= s; }
  friend LieElement operator*(const FieldScalar& s, LieElement a) { return a *= s; }

  friend bool operator==(const LieElement& a, const LieElement& b) {
    return a.arity_ == b.arity_ && a.field_ == b.field_ && a.terms_ == b.terms_;
  }

  void check(const LieElement& o) const {
    if (arity_ != o.arity_) throw Mismatch("Lie element arities differ");
    if (!(field_ == o.field_)) throw Mismatch("Lie element fields differ");
  }

 private:
  friend void normalize_into(LieElement&, std::vector<std::uint32_t>, FieldScalar);

  void check_word(const LieWord& w) const {
    if (w.indices.empty()) throw InvalidArgument("empty Lie word");
    for (auto i : w.indices) {
      if (i >= arity_) throw InvalidArgument("generator x" + std::to_string(i + 1) + " out of range");
    }
    if (w.length() > degree_cap()) {
      throw DegreeCapExceeded("word length " + std::to_string(w.length()) + " exceeds the degree cap " +
                              std::to_string(degree_cap()));
    }
  }

  void add_unchecked(const LieWord& w, const FieldScalar& c) {
    if (!(c.field() == field_)) throw Mismatch("coefficient field differs from Lie element field");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::size_t arity_ = 0;
  FieldDescriptor field_;
  Terms terms_;
};

// Rewrites c·[w] into normal words and adds them to `out`.
inline void normalize_into(LieElement& out, std::vector<std::uint32_t> w, FieldScalar c) {
  out.check_word(LieWord(w));
  if (c.is_zero()) return;
  if (w.size() == 1) {
    out.add_unchecked(LieWord(std::move(w)), c);
    return;
  }
  if (w[0] == w[1]) return;
  if (w[0] < w[1]) {
    std::swap(w[0], w[1]);
    c = -c;
  }
  std::sort(w.begin() + 2, w.end());
  if (w.size() == 2 || w[1] <= w[2]) {
    out.add_unchecked(LieWord(std::move(w)), c);
    return;
  }
  // [a,b,t,...] = [a,t,b,...] - [b,t,a,...] with t < b
  const auto a = w[0], b = w[1], t = w[2];
  std::vector<std::uint32_t> first = w, second = w;
  first[1] = t;
  first[2] = b;
  second[0] = b;
  second[1] = t;
  second[2] = a;
  normalize_into(out, std::move(first), c);
  normalize_into(out, std::move(second), -c);
}

inline void LieElement::add_word(const std::vector<std::uint32_t>& indices, const FieldScalar& c) {
  normalize_into(*this, indices, c);
}

/// The left-normed bracket [x_{i_1}, ..., x_{i_n}] in the normal basis.
inline LieElement normalize_word(const LieWord& w, std::size_t arity, const FieldDescriptor& field) {
  LieElement out(arity, field);
  out.add_word(w.indices, FieldScalar::one(field));
  return out;
}

inline LieElement bracket(const LieElement& u, const LieElement& v) {
  u.check(v);
  LieElement out(u.arity(), u.field());
  for (const auto& [wu, cu] : u.terms()) {
    for (const auto& [wv, cv] : v.terms()) {
      if (wu.length() >= 2 && wv.length() >= 2) continue;
      if (wv.length() == 1) {
        auto w = wu.indices;
        w.push_back(wv.indices[0]);
        normalize_into(out, std::move(w), cu * cv);
      } else {
        // [x_i, w] = -[w, x_i]
        auto w = wv.indices;
        w.push_back(wu.indices[0]);
        normalize_into(out, std::move(w), -(cu * cv));
      }
    }
  }
  return out;
}

/// Generator images x_1 .. x_d.
struct LieEndomorphism {
  std::vector<LieElement> images;
};

inline LieEndomorphism identity_endo(std::size_t arity, const FieldDescriptor& field) {
  LieEndomorphism e;
  for (std::size_t j = 0; j < arity; ++j) e.images.push_back(LieElement::generator(arity, field, j));
  return e;
}

inline LieElement apply_endo(const LieEndomorphism& e, const LieElement& u) {
  if (e.images.size() != u.arity()) throw Mismatch("endomorphism arity differs from element arity");
  for (const auto& img : e.images) u.check(img);
  LieElement out(u.arity(), u.field());
  for (const auto& [w, c] : u.terms()) {
    LieElement acc = e.images[w.indices[0]];
    for (std::size_t k = 1; k < w.length() && !acc.is_zero(); ++k) {
      acc = bracket(acc, e.images[w.indices[k]]);
    }
    out += acc * c;
  }
  return out;
}

/// x_j -> x_j + [x_j, v] for v in the commutator ideal.
inline LieEndomorphism inner_auto(const LieElement& v) {
  if (v.has_linear_part()) throw InvalidArgument("inner automorphism needs v in the commutator ideal");
  LieEndomorphism e = identity_endo(v.arity(), v.field());
  for (auto& img : e.images) img += bracket(img, v);
  return e;
}

struct LieParts {
  LieElement linear;
  LieElement x1_commutator;      // words with i_2 = 1
  LieElement non_x1_commutator;  // words with i_2 >= 2; these avoid x_1
};

inline LieParts split_parts(const LieElement& u) {
  LieParts p{LieElement(u.arity(), u.field()), LieElement(u.arity(), u.field()),
             LieElement(u.arity(), u.field())};
  for (const auto& [w, c] : u.terms()) {
    if (w.length() == 1) {
      p.linear.add_normal(w, c);
    } else if (w.indices[1] == 0) {
      p.x1_commutator.add_normal(w, c);
    } else {
      p.non_x1_commutator.add_normal(w, c);
    }
  }
  return p;
}

/// Renames x_i to x_{perm[i]} and renormalizes.
inline LieElement relabel(const LieElement& u, const std::vector<std::size_t>& perm) {
  if (perm.size() != u.arity()) throw Mismatch("relabeling has the wrong length");
  LieElement out(u.arity(), u.field());
  for (const auto& [w, c] : u.terms()) {
    auto idx = w.indices;
    for (auto& i : idx) i = static_cast<std::uint32_t>(perm.at(i));
    out.add_word(idx, c);
  }
  return out;
}

/// Linear part as a coefficient vector.
inline std::vector<FieldScalar> linear_coefficients(const LieElement& u) {
  std::vector<FieldScalar> c(u.arity(), FieldScalar::zero(u.field()));
  for (const auto& [w, s] : u.terms()) {
    if (w.length() != 1) break;
    c[w.indices[0]] = s;
  }
  return c;
}

inline LieElement linear_form(const std::vector<FieldScalar>& c, const FieldDescriptor& field) {
  LieElement out(c.size(), field);
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.add_normal(LieWord({static_cast<std::uint32_t>(i)}), c[i]);
  }
  return out;
}

}  // namespace primlen
