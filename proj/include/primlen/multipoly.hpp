#pragma once

// Sparse multivariate polynomials in x_1..x_d over a FieldScalar.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "primlen/error.hpp"
#include "primlen/field.hpp"

namespace primlen {

/// Exponent vector (a_1, ..., a_d).
struct Monomial {
  std::vector<std::uint32_t> exponents;

  Monomial() = default;
  explicit Monomial(std::size_t arity) : exponents(arity, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : exponents(std::move(e)) {}

  static Monomial variable(std::size_t arity, std::size_t index) {
    Monomial m(arity);
    m.exponents.at(index) = 1;
    return m;
  }

  std::size_t arity() const noexcept { return exponents.size(); }

  std::uint64_t degree() const noexcept {
    return std::accumulate(exponents.begin(), exponents.end(), std::uint64_t{0});
  }

  bool is_constant() const noexcept { return degree() == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.arity() != b.arity()) throw Mismatch("monomial arities differ");
    Monomial m = a;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += b.exponents[i];
    return m;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order: lower total degree first, then by exponent of
/// x_1, x_2, ... (larger exponent on an earlier variable is larger).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept {
    const auto da = a.degree();
    const auto db = b.degree();
    if (da != db) return da < db;
    return a.exponents < b.exponents;
  }
};

/// (a_1+...+a_d)! / (a_1!...a_d!) as a product of binomials.
inline mpz_class multinomial(const Monomial& a) {
  mpz_class result = 1;
  unsigned long running = 0;
  for (auto e : a.exponents) {
    running += e;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), running, e);
    result *= b;
  }
  return result;
}

inline constexpr long long kDegreeOfZero = std::numeric_limits<long long>::min();

class Polynomial {
 public:
  using Terms = std::map<Monomial, FieldScalar, GradedLexLess>;

  Polynomial() = default;
  Polynomial(std::size_t arity, const FieldDescriptor& field) : arity_(arity), field_(field) {}

  static Polynomial constant(std::size_t arity, const FieldScalar& c) {
    Polynomial p(arity, c.field());
    p.add_term(Monomial(arity), c);
    return p;
  }

  /// x_{index+1}; indices are 0-based.
  static Polynomial variable(std::size_t arity, const FieldDescriptor& field, std::size_t index) {
    if (index >= arity) throw InvalidArgument("variable index out of range");
    Polynomial p(arity, field);
    p.add_term(Monomial::variable(arity, index), FieldScalar::one(field));
    return p;
  }

  std::size_t arity() const noexcept { return arity_; }
  const FieldDescriptor& field() const noexcept { return field_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Adds c·m, dropping the term if it cancels.
  void add_term(const Monomial& m, const FieldScalar& c) {
    if (m.arity() != arity_) throw Mismatch("monomial arity differs from polynomial arity");
    if (!(c.field() == field_)) throw Mismatch("coefficient field differs from polynomial field");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  FieldScalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? FieldScalar::zero(field_) : it->second;
  }

  /// Largest |a| over the stored terms, kDegreeOfZero for the zero polynomial.
  long long total_degree() const {
    if (terms_.empty()) return kDegreeOfZero;
    return static_cast<long long>(terms_.rbegin()->first.degree());
  }

  Polynomial homogeneous_component(std::uint64_t p) const {
    Polynomial out(arity_, field_);
    for (const auto& [m, c] : terms_) {
      if (m.degree() == p) out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
  }

  /// True iff no term involves any of the variables with index < `first`.
  bool only_uses_variables_from(std::size_t first) const {
    for (const auto& [m, c] : terms_) {
      for (std::size_t i = 0; i < first && i < arity_; ++i) {
        if (m.exponents[i] != 0) return false;
      }
    }
    return true;
  }

  bool uses_variable(std::size_t index) const {
    for (const auto& [m, c] : terms_) {
      if (m.exponents.at(index) != 0) return true;
    }
    return false;
  }

  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(const FieldScalar& s) {
    if (!(s.field() == field_)) throw Mismatch("scalar field differs from polynomial field");
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const FieldScalar& s) { return a *= s; }
  friend Polynomial operator*(const FieldScalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial out(a.arity_, a.field_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    }
    return out;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.arity_ == b.arity_ && a.field_ == b.field_ && a.terms_ == b.terms_;
  }

 private:
  void check(const Polynomial& o) const {
    if (arity_ != o.arity_) throw Mismatch("polynomial arities differ");
    if (!(field_ == o.field_)) throw Mismatch("polynomial fields differ");
  }

  std::size_t arity_ = 0;
  FieldDescriptor field_;
  Terms terms_;
};

namespace detail {

// Sum of rationals kept over a running common denominator, so adding a
// term whose denominator divides it costs no gcd; one gcd at the end.
class RationalSum {
 public:
  void add(const mpq_class& q) {
    const mpz_class& b = q.get_den();
    if (b == 1) {
      mpz_addmul(num_.get_mpz_t(), q.get_num_mpz_t(), den_.get_mpz_t());
      return;
    }
    if (!mpz_divisible_p(den_.get_mpz_t(), b.get_mpz_t())) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), den_.get_mpz_t(), b.get_mpz_t());
      mpz_class f;
      mpz_divexact(f.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t());
      num_ *= f;
      den_ *= f;
    }
    mpz_class f;
    mpz_divexact(f.get_mpz_t(), den_.get_mpz_t(), b.get_mpz_t());
    mpz_addmul(num_.get_mpz_t(), q.get_num_mpz_t(), f.get_mpz_t());
  }

  mpq_class value() const {
    mpq_class r(num_, den_);
    r.canonicalize();
    return r;
  }

 private:
  mpz_class num_ = 0;
  mpz_class den_ = 1;
};

}  // namespace detail

/// Collects many terms and builds the polynomial once. Over Q this avoids a
/// pair of gcds per addition; it pays off when the summands share
/// denominators, and loses badly when they do not.
class PolynomialAccumulator {
 public:
  PolynomialAccumulator(std::size_t arity, const FieldDescriptor& field)
      : arity_(arity), field_(field) {}

  void add_term(const Monomial& m, const FieldScalar& c) {
    if (!(c.field() == field_)) throw Mismatch("accumulated coefficient field differs");
    if (c.is_zero()) return;
    if (field_.is_rationals()) {
      rational_[m].add(c.rational());
    } else {
      auto [it, inserted] = residue_.try_emplace(m, c);
      if (!inserted) it->second += c;
    }
  }

  void add(const Polynomial& f) {
    check(f);
    for (const auto& [m, c] : f.terms()) add_term(m, c);
  }

  void add_scaled(const FieldScalar& s, const Polynomial& f) {
    check(f);
    if (s.is_zero()) return;
    for (const auto& [m, c] : f.terms()) add_term(m, s * c);
  }

  Polynomial finish() const {
    Polynomial out(arity_, field_);
    for (const auto& [m, acc] : rational_) {
      out.add_term(m, FieldScalar::from_rational(field_, acc.value()));
    }
    for (const auto& [m, c] : residue_) out.add_term(m, c);
    return out;
  }

 private:
  void check(const Polynomial& f) const {
    if (f.arity() != arity_ || !(f.field() == field_)) {
      throw Mismatch("accumulated polynomial arity or field differs");
    }
  }

  std::size_t arity_;
  FieldDescriptor field_;
  std::map<Monomial, detail::RationalSum, GradedLexLess> rational_;
  std::map<Monomial, FieldScalar, GradedLexLess> residue_;
};

/// Sum of many polynomials of one arity and field.
inline Polynomial sum(std::span<const Polynomial> fs, std::size_t arity,
                      const FieldDescriptor& field) {
  PolynomialAccumulator acc(arity, field);
  for (const auto& f : fs) acc.add(f);
  return acc.finish();
}

/// f^k by repeated multiplication; f^0 = 1.
inline Polynomial pow(const Polynomial& f, std::uint64_t k) {
  Polynomial result = Polynomial::constant(f.arity(), FieldScalar::one(f.field()));
  for (std::uint64_t i = 0; i < k; ++i) result *= f;
  return result;
}

/// All powers f^0 .. f^k.
inline std::vector<Polynomial> powers(const Polynomial& f, std::uint64_t k) {
  std::vector<Polynomial> out;
  out.reserve(k + 1);
  out.push_back(Polynomial::constant(f.arity(), FieldScalar::one(f.field())));
  for (std::uint64_t i = 1; i <= k; ++i) out.push_back(out.back() * f);
  return out;
}

inline long long total_degree(const Polynomial& f) { return f.total_degree(); }

inline Polynomial homogeneous_component(const Polynomial& f, std::uint64_t p) {
  return f.homogeneous_component(p);
}

/// Image of f under the ring endomorphism x_i -> images[i].
inline Polynomial substitute(const Polynomial& f, std::span<const Polynomial> images) {
  if (images.size() != f.arity()) throw Mismatch("substitution needs one image per variable");
  if (images.empty()) return f;
  const std::size_t target_arity = images.front().arity();
  for (const auto& g : images) {
    if (g.arity() != target_arity || !(g.field() == f.field())) {
      throw Mismatch("substitution images disagree in arity or field");
    }
  }

  std::vector<std::uint32_t> max_exp(f.arity(), 0);
  for (const auto& [m, c] : f.terms()) {
    for (std::size_t i = 0; i < m.arity(); ++i) max_exp[i] = std::max(max_exp[i], m.exponents[i]);
  }
  std::vector<std::vector<Polynomial>> cache(f.arity());
  for (std::size_t i = 0; i < f.arity(); ++i) cache[i] = powers(images[i], max_exp[i]);

  Polynomial out(target_arity, f.field());
  for (const auto& [m, c] : f.terms()) {
    Polynomial product = Polynomial::constant(target_arity, FieldScalar::one(f.field()));
    for (std::size_t i = 0; i < m.arity(); ++i) {
      if (m.exponents[i] != 0) product *= cache[i][m.exponents[i]];
    }
    // scale last: c may be large while the image powers are small
    for (const auto& [pm, pc] : product.terms()) out.add_term(pm, c * pc);
  }
  return out;
}

inline Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images) {
  return substitute(f, std::span<const Polynomial>(images));
}

/// Generator images of the identity endomorphism.
inline std::vector<Polynomial> identity_images(std::size_t arity, const FieldDescriptor& field) {
  std::vector<Polynomial> out;
  out.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) out.push_back(Polynomial::variable(arity, field, i));
  return out;
}

}  // namespace primlen
