#pragma once

// Exact scalars over the rationals and over prime fields GF(p).

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "primlen/error.hpp"

namespace primlen {

class FieldDescriptor {
 public:
  enum class Kind { Rationals, PrimeField };

  /// Largest accepted modulus. Primality is checked by trial division.
  static constexpr std::uint64_t kMaxPrime = std::uint64_t{1} << 32;

  constexpr FieldDescriptor() = default;

  static constexpr FieldDescriptor rationals() { return FieldDescriptor(); }

  static FieldDescriptor prime(std::uint64_t p) {
    if (!is_prime(p)) {
      throw InvalidArgument("modulus " + std::to_string(p) + " is not a prime below 2^32");
    }
    FieldDescriptor f;
    f.kind_ = Kind::PrimeField;
    f.modulus_ = p;
    return f;
  }

  /// Accepts "Q", "F2", "F3", "F<p>".
  static FieldDescriptor parse(std::string_view text) {
    if (text == "Q") return rationals();
    if (text.size() >= 2 && text.front() == 'F') {
      std::uint64_t p = 0;
      for (char c : text.substr(1)) {
        if (c < '0' || c > '9' || p > kMaxPrime) {
          throw InvalidArgument("bad field flag '" + std::string(text) + "'");
        }
        p = p * 10 + static_cast<std::uint64_t>(c - '0');
      }
      return prime(p);
    }
    throw InvalidArgument("bad field flag '" + std::string(text) + "' (expected Q or F<p>)");
  }

  Kind kind() const noexcept { return kind_; }
  bool is_rationals() const noexcept { return kind_ == Kind::Rationals; }
  std::uint64_t modulus() const noexcept { return modulus_; }

  std::uint64_t characteristic() const noexcept { return is_rationals() ? 0 : modulus_; }

  /// False exactly for GF(2).
  bool has_more_than_two_elements() const noexcept { return is_rationals() || modulus_ > 2; }

  std::string to_string() const { return is_rationals() ? "Q" : "F" + std::to_string(modulus_); }

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;

  static bool is_prime(std::uint64_t p) {
    if (p < 2 || p >= kMaxPrime) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q) {
      if (p % q == 0) return false;
    }
    return true;
  }

 private:
  Kind kind_ = Kind::Rationals;
  std::uint64_t modulus_ = 0;
};

inline std::uint64_t characteristic(const FieldDescriptor& f) { return f.characteristic(); }
inline bool has_more_than_two_elements(const FieldDescriptor& f) {
  return f.has_more_than_two_elements();
}

/// An element of the field named by its descriptor. Rationals are kept in
/// lowest terms with a positive denominator, residues in [0, p).
class FieldScalar {
 public:
  FieldScalar() : value_(mpq_class(0)) {}

  static FieldScalar zero(const FieldDescriptor& f) { return from_integer(f, 0); }
  static FieldScalar one(const FieldDescriptor& f) { return from_integer(f, 1); }

  static FieldScalar from_integer(const FieldDescriptor& f, long long v) {
    return from_integer(f, mpz_class(std::to_string(v)));
  }

  static FieldScalar from_integer(const FieldDescriptor& f, const mpz_class& v) {
    FieldScalar s;
    s.field_ = f;
    if (f.is_rationals()) {
      s.value_ = mpq_class(v);
    } else {
      s.value_ = reduce(v, f.modulus());
    }
    return s;
  }

  static FieldScalar from_rational(const FieldDescriptor& f, const mpz_class& num,
                                   const mpz_class& den) {
    if (den == 0) throw DivisionByZero();
    if (f.is_rationals()) {
      mpq_class q(num, den);
      q.canonicalize();
      FieldScalar s;
      s.field_ = f;
      s.value_ = std::move(q);
      return s;
    }
    return from_integer(f, num) / from_integer(f, den);
  }

  static FieldScalar from_rational(const FieldDescriptor& f, const mpq_class& q) {
    return from_rational(f, q.get_num(), q.get_den());
  }

  const FieldDescriptor& field() const noexcept { return field_; }

  bool is_zero() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q) == 0;
    return std::get<std::uint64_t>(value_) == 0;
  }

  bool is_one() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return *q == 1;
    return std::get<std::uint64_t>(value_) == 1;
  }

  /// Integer-valued rational; residues always count as integers.
  bool is_integer() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_den() == 1;
    return true;
  }

  const mpq_class& rational() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return *q;
    throw Mismatch("scalar is a residue, not a rational");
  }

  std::uint64_t residue() const {
    if (auto* r = std::get_if<std::uint64_t>(&value_)) return *r;
    throw Mismatch("scalar is a rational, not a residue");
  }

  FieldScalar inverse() const {
    if (is_zero()) throw DivisionByZero();
    FieldScalar s;
    s.field_ = field_;
    if (auto* q = std::get_if<mpq_class>(&value_)) {
      s.value_ = mpq_class(1) / *q;
    } else {
      s.value_ = pow_mod(residue(), field_.modulus() - 2, field_.modulus());
    }
    return s;
  }

  FieldScalar pow(std::uint64_t e) const {
    FieldScalar result = one(field_);
    FieldScalar base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return result;
  }

  FieldScalar operator-() const {
    FieldScalar s = *this;
    if (auto* q = std::get_if<mpq_class>(&s.value_)) {
      *q = -*q;
    } else {
      auto& r = std::get<std::uint64_t>(s.value_);
      if (r != 0) r = field_.modulus() - r;
    }
    return s;
  }

  FieldScalar& operator+=(const FieldScalar& o) {
    check(o);
    if (auto* q = std::get_if<mpq_class>(&value_)) {
      *q += std::get<mpq_class>(o.value_);
    } else {
      auto& r = std::get<std::uint64_t>(value_);
      r = (r + std::get<std::uint64_t>(o.value_)) % field_.modulus();
    }
    return *this;
  }

  FieldScalar& operator-=(const FieldScalar& o) {
    check(o);
    if (auto* q = std::get_if<mpq_class>(&value_)) {
      *q -= std::get<mpq_class>(o.value_);
    } else {
      auto& r = std::get<std::uint64_t>(value_);
      r = (r + field_.modulus() - std::get<std::uint64_t>(o.value_)) % field_.modulus();
    }
    return *this;
  }

  FieldScalar& operator*=(const FieldScalar& o) {
    check(o);
    if (auto* q = std::get_if<mpq_class>(&value_)) {
      *q *= std::get<mpq_class>(o.value_);
    } else {
      auto& r = std::get<std::uint64_t>(value_);
      r = mul_mod(r, std::get<std::uint64_t>(o.value_), field_.modulus());
    }
    return *this;
  }

  FieldScalar& operator/=(const FieldScalar& o) {
    check(o);
    if (o.is_zero()) throw DivisionByZero();
    if (auto* q = std::get_if<mpq_class>(&value_)) {
      *q /= std::get<mpq_class>(o.value_);
      return *this;
    }
    return *this *= o.inverse();
  }

  friend FieldScalar operator+(FieldScalar a, const FieldScalar& b) { return a += b; }
  friend FieldScalar operator-(FieldScalar a, const FieldScalar& b) { return a -= b; }
  friend FieldScalar operator*(FieldScalar a, const FieldScalar& b) { return a *= b; }
  friend FieldScalar operator/(FieldScalar a, const FieldScalar& b) { return a /= b; }

  friend bool operator==(const FieldScalar& a, const FieldScalar& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

  /// "a/b" or "a" for rationals, the residue in [0, p) otherwise.
  std::string to_string() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
    return std::to_string(std::get<std::uint64_t>(value_));
  }

  /// Residues are printed unsigned, so only rationals can be negative.
  bool is_negative() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q) < 0;
    return false;
  }

  static std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  }

  static std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e > 0) {
      if (e & 1) r = mul_mod(r, b, p);
      b = mul_mod(b, b, p);
      e >>= 1;
    }
    return r;
  }

 private:
  static std::uint64_t reduce(const mpz_class& v, std::uint64_t p) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
    return r.get_ui();
  }

  void check(const FieldScalar& o) const {
    if (!(field_ == o.field_)) {
      throw Mismatch("scalars over " + field_.to_string() + " and " + o.field_.to_string());
    }
  }

  FieldDescriptor field_;
  std::variant<mpq_class, std::uint64_t> value_;
};

inline FieldScalar inverse(const FieldScalar& a) { return a.inverse(); }

}  // namespace primlen
