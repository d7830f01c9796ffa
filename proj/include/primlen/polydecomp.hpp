#pragma once

// Decomposition of f in K[x_1..x_d], char K = 0, into at most
// binom(n+d-1, d-1) primitive polynomials, n = deg f.
//
// After a linear change of variables ψ the linear part of f is δ·x_1,
// δ ∈ {0, 1}. Every summand has the shape
//
//     u_k = β_k + ξ_{k1} x_1 + Σ_{p=2..n} ξ_{kp} s(α_k)^p,
//     s(α) = x_1 + Σ_{i=2..d} α^{(n+1)^{i-2}} x_i,
//
// which is the image of x_1 under the triangular map x_1 -> β_k + ξ_{k1} x_1
// + Σ ξ_{kp} x_2^p followed by the affine map x_2 -> s(α_k). Matching the
// degree-p components gives, for every monomial a with |a| = p,
//
//     multinomial(a) · Σ_k ξ_{kp} α_k^{E(a)} = μ_a,
//     E(a) = a_2 + a_3 (n+1) + ... + a_d (n+1)^{d-2},
//
// a generalized Vandermonde system in the nodes α_k = k + 1.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primlen/error.hpp"
#include "primlen/field.hpp"
#include "primlen/linalg.hpp"
#include "primlen/multipoly.hpp"
#include "primlen/polyauto.hpp"

namespace primlen {

enum class DecompositionStatus { Finite, Infinite };

struct PolySummand {
  Polynomial summand;
  PolyCertificate certificate;
};

struct PolyDecomposition {
  Polynomial input;
  DecompositionStatus status = DecompositionStatus::Finite;
  std::vector<PolySummand> summands;
  std::optional<std::uint64_t> bound;  // absent for Infinite
  OpCounter ops;                       // arithmetic of the linear solves
  std::string note;
};

inline constexpr const char* kEmptySumNote =
    "zero is decomposed as the empty sum (additive primitive length 0)";

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) throw Unsupported("exponent code overflows 64 bits");
  return a * b;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > UINT64_MAX - a) throw Unsupported("exponent code overflows 64 bits");
  return a + b;
}

inline void monomials_rec(std::size_t i, std::uint64_t left, Monomial& cur,
                          std::vector<Monomial>& out) {
  if (i + 1 == cur.arity()) {
    cur.exponents[i] = static_cast<std::uint32_t>(left);
    out.push_back(cur);
    return;
  }
  for (std::uint64_t e = 0; e <= left; ++e) {
    cur.exponents[i] = static_cast<std::uint32_t>(e);
    monomials_rec(i + 1, left - e, cur, out);
  }
}

}  // namespace detail

/// All monomials of total degree p in d variables.
inline std::vector<Monomial> monomials_of_degree(std::size_t d, std::uint64_t p) {
  std::vector<Monomial> out;
  if (d == 0) return out;
  Monomial cur(d);
  detail::monomials_rec(0, p, cur, out);
  return out;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  if (!b.fits_ulong_p()) throw Unsupported("binomial coefficient overflows 64 bits");
  return b.get_ui();
}

/// binom(n+d-1, d-1), the summand count used for deg f = n > 1 in d > 1 variables.
inline std::uint64_t plength_bound(std::uint64_t n, std::uint64_t d) {
  if (n <= 1 || d <= 1) throw InvalidArgument("plength_bound needs degree > 1 and arity > 1");
  return binomial(n + d - 1, d - 1);
}

/// Base-(n+1) code a_1 + a_2 (n+1) + a_3 (n+1)^2 + ...; injective on |a| <= n.
inline std::uint64_t exponent_code(const Monomial& a, std::uint64_t n) {
  if (a.degree() > n) throw InvalidArgument("exponent_code needs |a| <= n");
  std::uint64_t code = 0;
  std::uint64_t place = 1;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    code = detail::checked_add(code, detail::checked_mul(a.exponents[i], place));
    if (i + 1 < a.arity()) place = detail::checked_mul(place, n + 1);
  }
  return code;
}

/// Power of α carried by x^a in s(α)^{|a|}: a_2 + a_3 (n+1) + ... + a_d (n+1)^{d-2}.
/// exponent_code(a, n) == a_1 + (n+1) · alpha_exponent(a, n).
inline std::uint64_t alpha_exponent(const Monomial& a, std::uint64_t n) {
  if (a.degree() > n) throw InvalidArgument("alpha_exponent needs |a| <= n");
  std::uint64_t e = 0;
  std::uint64_t place = 1;
  for (std::size_t i = 1; i < a.arity(); ++i) {
    e = detail::checked_add(e, detail::checked_mul(a.exponents[i], place));
    if (i + 1 < a.arity()) place = detail::checked_mul(place, n + 1);
  }
  return e;
}

/// Nodes α_k = k + 1, k = 1..N.
inline std::vector<FieldScalar> choose_alphas(std::uint64_t count, const FieldDescriptor& f) {
  if (!f.is_rationals()) throw Unsupported("node choice is only defined over Q");
  std::vector<FieldScalar> out;
  out.reserve(count);
  for (std::uint64_t k = 1; k <= count; ++k) {
    out.push_back(FieldScalar::from_integer(f, static_cast<long long>(k + 1)));
  }
  return out;
}

/// s(α) = x_1 + Σ_{i=2..d} α^{(n+1)^{i-2}} x_i.
inline Polynomial build_s(const FieldScalar& alpha, std::uint64_t n, std::size_t d) {
  if (alpha.is_zero()) throw InvalidArgument("build_s needs a nonzero node");
  if (d < 2) throw InvalidArgument("build_s needs at least two variables");
  const auto f = alpha.field();
  Polynomial s = Polynomial::variable(d, f, 0);
  std::uint64_t e = 1;
  for (std::size_t i = 1; i < d; ++i) {
    s.add_term(Monomial::variable(d, i), alpha.pow(e));
    if (i + 1 < d) e = detail::checked_mul(e, n + 1);
  }
  return s;
}

struct Linearization {
  std::optional<AffineAuto> psi;  // absent: identity
  Polynomial g;                   // psi(f)
};

/// Linear change of variables taking the degree-1 component of f to x_1.
inline Linearization linearize(const Polynomial& f) {
  const auto d = f.arity();
  const auto fd = f.field();
  std::vector<FieldScalar> c(d, FieldScalar::zero(fd));
  for (std::size_t i = 0; i < d; ++i) c[i] = f.coefficient(Monomial::variable(d, i));
  const auto pivot = std::find_if(c.begin(), c.end(), [](const auto& s) { return !s.is_zero(); });
  if (pivot == c.end()) return {std::nullopt, f};
  const auto piv = static_cast<std::size_t>(pivot - c.begin());
  if (piv == 0 && c[0].is_one() &&
      std::all_of(c.begin() + 1, c.end(), [](const auto& s) { return s.is_zero(); })) {
    return {std::nullopt, f};
  }

  // ψ(x_piv) = (x_1 - Σ_{i>piv} c_i x_i) / c_piv and, when piv > 1, ψ(x_1) = x_piv.
  DenseMatrix m = DenseMatrix::identity(d, fd);
  const FieldScalar inv = c[piv].inverse();
  for (std::size_t i = 0; i < d; ++i) m(i, piv) = FieldScalar::zero(fd);
  m(0, piv) = inv;
  for (std::size_t i = piv + 1; i < d; ++i) m(i, piv) = -c[i] * inv;
  if (piv != 0) {
    m(0, 0) = FieldScalar::zero(fd);
    m(piv, 0) = FieldScalar::one(fd);
  }
  AffineAuto psi = make_affine(std::move(m), std::vector<FieldScalar>(d, FieldScalar::zero(fd)));
  Polynomial g = primlen::apply(psi, f);
  return {std::move(psi), std::move(g)};
}

/// N nonzero scalars summing to δ: (1, ..., 1, δ-(N-1)), falling back to
/// (1, ..., 1, 2, δ-N) when the last entry would vanish.
inline std::vector<FieldScalar> assign_linear_coeffs(std::uint64_t count, int delta,
                                                     const FieldDescriptor& f) {
  if (count == 0) throw InvalidArgument("assign_linear_coeffs needs at least one summand");
  std::vector<FieldScalar> xi(count, FieldScalar::one(f));
  const auto n = static_cast<long long>(count);
  xi.back() = FieldScalar::from_integer(f, delta - (n - 1));
  if (xi.back().is_zero()) {
    if (count < 2) throw InvalidArgument("a single nonzero coefficient cannot sum to 0");
    xi[count - 2] = FieldScalar::from_integer(f, 2);
    xi.back() = FieldScalar::from_integer(f, delta - n);
  }
  return xi;
}

struct DegreeSolution {
  std::vector<FieldScalar> xi;  // one per node; entries past N_p are zero
  OpCounter ops;
};

/// Coefficients ξ_{kp} with Σ_k ξ_{kp} s(α_k)^p = g_p, solving the leading
/// N_p × N_p block (N_p = number of degree-p monomials).
inline DegreeSolution solve_degree(std::uint64_t p, const Polynomial& g_p,
                                   std::span<const FieldScalar> alphas, std::uint64_t n) {
  const auto d = g_p.arity();
  const auto f = g_p.field();
  DegreeSolution out{std::vector<FieldScalar>(alphas.size(), FieldScalar::zero(f)), {}};
  for (const auto& [m, c] : g_p.terms()) {
    if (m.degree() != p) throw InvalidArgument("solve_degree needs a homogeneous component");
  }
  if (g_p.is_zero()) return out;

  auto rows = monomials_of_degree(d, p);
  if (rows.size() > alphas.size()) throw InvalidArgument("fewer nodes than degree-p monomials");
  std::vector<std::pair<std::uint64_t, Monomial>> keyed;
  keyed.reserve(rows.size());
  for (auto& m : rows) keyed.emplace_back(alpha_exponent(m, n), std::move(m));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::uint64_t> exponents;
  std::vector<FieldScalar> rhs;
  exponents.reserve(keyed.size());
  rhs.reserve(keyed.size());
  for (const auto& [e, m] : keyed) {
    exponents.push_back(e);
    rhs.push_back(g_p.coefficient(m) / FieldScalar::from_integer(f, multinomial(m)));
  }
  const auto block = alphas.subspan(0, keyed.size());
  // Results are re-checked by verify(); skip the per-division remainder test.
  auto solved = solve_square(vandermonde_power_matrix(block, exponents), rhs,
                             EliminationOptions{.check_divisions = false});
  std::copy(solved.x.begin(), solved.x.end(), out.xi.begin());
  out.ops = solved.ops;
  return out;
}

namespace detail {

// Affine automorphism listing only x_a -> f for a degree-<=1 polynomial f,
// a the first variable with nonzero coefficient.
inline PolyCertificate affine_certificate(const Polynomial& f) {
  const auto d = f.arity();
  const auto fd = f.field();
  std::size_t a = d;
  for (std::size_t i = 0; i < d && a == d; ++i) {
    if (!f.coefficient(Monomial::variable(d, i)).is_zero()) a = i;
  }
  if (a == d) throw InvalidArgument("affine certificate needs a nonzero linear part");
  AffineAuto aff = affine_identity(d, fd);
  for (std::size_t i = 0; i < d; ++i) aff.matrix(i, a) = f.coefficient(Monomial::variable(d, i));
  aff.shift[a] = f.coefficient(Monomial(d));
  return PolyCertificate{{make_affine(std::move(aff.matrix), std::move(aff.shift))}, a};
}

}  // namespace detail

/// Summand count a correct decomposition of f may use, or nullopt when f has
/// no finite decomposition (one variable, degree > 1).
inline std::optional<std::uint64_t> expected_poly_bound(const Polynomial& f) {
  const auto deg = f.total_degree();
  if (deg == kDegreeOfZero) return 0;
  if (deg == 0) return 2;
  if (deg == 1) return 1;
  if (f.arity() == 1) return std::nullopt;
  return plength_bound(static_cast<std::uint64_t>(deg), f.arity());
}

inline PolyDecomposition decompose(const Polynomial& f) {
  const auto d = f.arity();
  const auto fd = f.field();
  if (!fd.is_rationals()) {
    throw Unsupported("polynomial decomposition needs characteristic 0 (got " + fd.to_string() + ")");
  }
  if (d == 0) throw InvalidArgument("polynomial has no variables");

  PolyDecomposition dec;
  dec.input = f;
  dec.bound = expected_poly_bound(f);
  const auto deg = f.total_degree();

  if (deg == kDegreeOfZero) {
    dec.note = kEmptySumNote;
    return dec;
  }
  if (deg == 0) {
    // β = (β + x_1) + (-x_1)
    const auto beta = f.coefficient(Monomial(d));
    auto x1 = Polynomial::variable(d, fd, 0);
    AffineAuto shift = affine_identity(d, fd);
    shift.shift[0] = beta;
    AffineAuto negate = affine_identity(d, fd);
    negate.matrix(0, 0) = -FieldScalar::one(fd);
    dec.summands.push_back({Polynomial::constant(d, beta) + x1, PolyCertificate{{shift}, 0}});
    dec.summands.push_back({-x1, PolyCertificate{{negate}, 0}});
    return dec;
  }
  if (deg == 1) {
    dec.summands.push_back({f, detail::affine_certificate(f)});
    return dec;
  }
  if (d == 1) {
    dec.status = DecompositionStatus::Infinite;
    return dec;
  }

  const auto n = static_cast<std::uint64_t>(deg);
  const auto count = *dec.bound;
  auto [psi, g] = linearize(f);
  const int delta = g.coefficient(Monomial::variable(d, 0)).is_zero() ? 0 : 1;
  const auto beta = g.coefficient(Monomial(d));
  const auto alphas = choose_alphas(count, fd);

  // xi[p][k] = ξ_{kp}
  std::vector<std::vector<FieldScalar>> xi(n + 1);
  xi[1] = assign_linear_coeffs(count, delta, fd);
  for (std::uint64_t p = 2; p <= n; ++p) {
    auto sol = solve_degree(p, g.homogeneous_component(p), alphas, n);
    xi[p] = std::move(sol.xi);
    dec.ops += sol.ops;
  }

  std::optional<ElementaryPolyAuto> psi_inv;
  if (psi) psi_inv = invert(*psi);

  for (std::uint64_t k = 0; k < count; ++k) {
    Polynomial tail(d, fd);
    if (k == 0) tail.add_term(Monomial(d), beta);
    for (std::uint64_t p = 2; p <= n; ++p) {
      Monomial m(d);
      m.exponents[1] = static_cast<std::uint32_t>(p);
      tail.add_term(m, xi[p][k]);
    }
    if (!tail.uses_variable(1)) {
      // u_k has degree <= 1; one affine factor, so that no listed image goes unused
      Polynomial u = Polynomial::constant(d, tail.coefficient(Monomial(d))) +
                     xi[1][k] * Polynomial::variable(d, fd, 0);
      if (psi_inv) u = primlen::apply(*psi_inv, u);
      dec.summands.push_back({u, detail::affine_certificate(u)});
      continue;
    }
    PolyCertificate cert;
    cert.generator = 0;
    cert.chain.push_back(triangular_on_first(d, xi[1][k], std::move(tail)));
    AffineAuto phi = affine_identity(d, fd);
    const auto s = build_s(alphas[k], n, d);
    for (std::size_t i = 0; i < d; ++i) phi.matrix(i, 1) = s.coefficient(Monomial::variable(d, i));
    cert.chain.push_back(make_affine(std::move(phi.matrix), std::move(phi.shift)));
    if (psi_inv) cert.chain.push_back(*psi_inv);
    Polynomial u = certify_apply(cert, d, fd);
    dec.summands.push_back({std::move(u), std::move(cert)});
  }
  return dec;
}

struct VerifyReport {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const noexcept { return ok; }
  static VerifyReport fail(std::string why) { return {false, std::move(why)}; }
};

/// Independent check of a decomposition: bound, exact re-summation, validity
/// of every elementary factor and replay of every certificate.
inline VerifyReport verify(const PolyDecomposition& dec) {
  const auto& f = dec.input;
  const auto d = f.arity();
  const auto fd = f.field();
  const auto expected = expected_poly_bound(f);

  if (dec.status == DecompositionStatus::Infinite) {
    if (expected) return VerifyReport::fail("status infinite but a finite decomposition exists");
    if (!dec.summands.empty()) return VerifyReport::fail("infinite status with summands");
    return {};
  }
  if (!expected) return VerifyReport::fail("finite status for an element of infinite length");
  if (dec.bound != expected) return VerifyReport::fail("bound mismatch");
  if (dec.summands.size() > *expected) return VerifyReport::fail("summand count exceeds bound");

  PolynomialAccumulator total(d, fd);
  for (const auto& s : dec.summands) {
    if (s.summand.arity() != d || !(s.summand.field() == fd)) {
      return VerifyReport::fail("summand arity or field mismatch");
    }
    total.add(s.summand);
  }
  if (!(total.finish() == f)) return VerifyReport::fail("sum mismatch");

  for (std::size_t k = 0; k < dec.summands.size(); ++k) {
    const auto& cert = dec.summands[k].certificate;
    const auto where = " in summand " + std::to_string(k + 1);
    if (cert.generator >= d) return VerifyReport::fail("certificate generator out of range" + where);
    for (const auto& a : cert.chain) {
      if (arity(a) != d || !(field_of(a) == fd)) {
        return VerifyReport::fail("invalid elementary factor" + where + ": arity or field mismatch");
      }
      if (auto err = validate(a)) return VerifyReport::fail("invalid elementary factor" + where + ": " + *err);
    }
    if (!(certify_apply(cert, d, fd) == dec.summands[k].summand)) {
      return VerifyReport::fail("certificate replay mismatch" + where);
    }
  }
  return {};
}

}  // namespace primlen
