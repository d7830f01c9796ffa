#pragma once

// Decomposition of f in the free metabelian Lie algebra of rank d >= 3 into
// at most 5 (d = 3) or 6 (d > 3) primitive elements, one more over GF(2).
//
// After a linear change of variables the linear part of f is δ x_1 and
//     f = δ x_1 + Σ_j β_j [x_j, x_1] + t + v(x_2, ..., x_d),
// where t collects the words of length >= 3 with i_2 = 1. The summands are
//     γ x_1 + v                      (triangular),
//     γ x_k + [w, x_k], w ∈ F'       (diagonal linear, then exp(ad(-w/γ))),
//     y_1 + [y_2, y_3], y_i linear   (triangular in the basis y),
// and the linear coefficients are chosen so the linear parts add up to δ x_1.

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "primlen/error.hpp"
#include "primlen/field.hpp"
#include "primlen/linalg.hpp"
#include "primlen/metalie.hpp"

namespace primlen {

/// x_j -> Σ_i matrix(i, j) x_i.
struct LinearLie {
  DenseMatrix matrix;
  friend bool operator==(const LinearLie&, const LinearLie&) = default;
};

/// x_j -> scales[j] x_j + tails[j], where the tail of x_{order[k]} only
/// involves x_{order[k+1]}, ..., x_{order[d-1]}.
struct TriangularLie {
  std::vector<std::size_t> order;
  std::vector<FieldScalar> scales;
  std::vector<LieElement> tails;
  friend bool operator==(const TriangularLie&, const TriangularLie&) = default;
};

/// x_j -> x_j + [x_j, v], v in the commutator ideal.
struct InnerLie {
  LieElement v;
  friend bool operator==(const InnerLie&, const InnerLie&) = default;
};

using ElementaryLieAuto = std::variant<LinearLie, TriangularLie, InnerLie>;

/// Innermost factor first, as for polynomial certificates.
struct LieCertificate {
  std::vector<ElementaryLieAuto> chain;
  std::size_t generator = 0;
  friend bool operator==(const LieCertificate&, const LieCertificate&) = default;
};

struct LieSummand {
  LieElement summand;
  LieCertificate certificate;
};

struct LieDecomposition {
  LieElement input;
  std::vector<LieSummand> summands;
  std::uint64_t bound = 0;
  std::string note;
};

inline std::size_t arity(const ElementaryLieAuto& a) {
  if (auto* l = std::get_if<LinearLie>(&a)) return l->matrix.cols();
  if (auto* t = std::get_if<TriangularLie>(&a)) return t->scales.size();
  return std::get<InnerLie>(a).v.arity();
}

inline FieldDescriptor field_of(const ElementaryLieAuto& a) {
  if (auto* l = std::get_if<LinearLie>(&a)) return l->matrix.field();
  if (auto* t = std::get_if<TriangularLie>(&a)) {
    return t->scales.empty() ? FieldDescriptor{} : t->scales.front().field();
  }
  return std::get<InnerLie>(a).v.field();
}

inline std::optional<std::string> validate(const ElementaryLieAuto& a) {
  if (auto* l = std::get_if<LinearLie>(&a)) {
    if (!l->matrix.is_square() || l->matrix.rows() == 0) return "linear factor has wrong shape";
    if (bareiss_determinant(l->matrix).value.is_zero()) return "linear matrix is singular";
    return std::nullopt;
  }
  if (auto* in = std::get_if<InnerLie>(&a)) {
    if (in->v.has_linear_part()) return "inner automorphism parameter has a linear part";
    return std::nullopt;
  }
  const auto& t = std::get<TriangularLie>(a);
  const auto d = t.scales.size();
  if (d == 0 || t.tails.size() != d || t.order.size() != d) return "triangular factor has wrong shape";
  std::vector<bool> seen(d, false);
  for (auto j : t.order) {
    if (j >= d || seen[j]) return "triangular order is not a permutation";
    seen[j] = true;
  }
  const auto f = t.scales.front().field();
  for (std::size_t j = 0; j < d; ++j) {
    if (!(t.scales[j].field() == f) || !(t.tails[j].field() == f) || t.tails[j].arity() != d) {
      return "triangular factor field or arity mismatch";
    }
    if (t.scales[j].is_zero()) return "triangular scale is zero";
  }
  for (std::size_t k = 0; k < d; ++k) {
    const auto& tail = t.tails[t.order[k]];
    for (std::size_t m = 0; m <= k; ++m) {
      if (tail.uses_generator(t.order[m])) {
        return "triangular tail of x" + std::to_string(t.order[k] + 1) + " uses x" +
               std::to_string(t.order[m] + 1);
      }
    }
  }
  return std::nullopt;
}

inline LieEndomorphism endomorphism(const ElementaryLieAuto& a) {
  const auto d = arity(a);
  const auto f = field_of(a);
  if (auto* l = std::get_if<LinearLie>(&a)) {
    LieEndomorphism e;
    for (std::size_t j = 0; j < d; ++j) {
      LieElement img(d, f);
      for (std::size_t i = 0; i < d; ++i) img.add_normal(LieWord({static_cast<std::uint32_t>(i)}), l->matrix(i, j));
      e.images.push_back(std::move(img));
    }
    return e;
  }
  if (auto* in = std::get_if<InnerLie>(&a)) return inner_auto(in->v);
  const auto& t = std::get<TriangularLie>(a);
  LieEndomorphism e;
  for (std::size_t j = 0; j < d; ++j) {
    LieElement img = t.tails[j];
    img.add_normal(LieWord({static_cast<std::uint32_t>(j)}), t.scales[j]);
    e.images.push_back(std::move(img));
  }
  return e;
}

inline LieElement apply(const ElementaryLieAuto& a, const LieElement& u) {
  if (auto* in = std::get_if<InnerLie>(&a)) {
    // exp(ad v) = 1 + ad v, since (ad v)^2 vanishes
    return u + bracket(u, in->v);
  }
  return apply_endo(endomorphism(a), u);
}

inline ElementaryLieAuto invert(const ElementaryLieAuto& a) {
  if (auto* l = std::get_if<LinearLie>(&a)) return LinearLie{inverse(l->matrix)};
  if (auto* in = std::get_if<InnerLie>(&a)) return InnerLie{-in->v};
  const auto& t = std::get<TriangularLie>(a);
  const auto d = t.scales.size();
  const auto f = field_of(a);
  // Back substitution along the order, last generator first.
  LieEndomorphism inv = identity_endo(d, f);
  std::vector<FieldScalar> scales(d);
  std::vector<LieElement> tails(d);
  for (std::size_t k = d; k-- > 0;) {
    const auto j = t.order[k];
    const FieldScalar s = t.scales[j].inverse();
    tails[j] = apply_endo(inv, t.tails[j]) * (-s);
    scales[j] = s;
    inv.images[j] = tails[j];
    inv.images[j].add_normal(LieWord({static_cast<std::uint32_t>(j)}), s);
  }
  return TriangularLie{t.order, std::move(scales), std::move(tails)};
}

/// True when every generator is fixed.
inline bool is_identity(const ElementaryLieAuto& a) {
  const auto e = endomorphism(a);
  for (std::size_t j = 0; j < e.images.size(); ++j) {
    if (!(e.images[j] == LieElement::generator(e.images.size(), field_of(a), j))) return false;
  }
  return true;
}

/// π∘a∘π for an involutive relabeling π.
inline ElementaryLieAuto conjugate(const ElementaryLieAuto& a, const std::vector<std::size_t>& pi) {
  if (auto* l = std::get_if<LinearLie>(&a)) {
    const auto d = l->matrix.rows();
    DenseMatrix m(d, d, l->matrix.field());
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m(i, j) = l->matrix(pi[i], pi[j]);
    }
    return LinearLie{std::move(m)};
  }
  if (auto* in = std::get_if<InnerLie>(&a)) return InnerLie{relabel(in->v, pi)};
  const auto& t = std::get<TriangularLie>(a);
  const auto d = t.scales.size();
  TriangularLie out{std::vector<std::size_t>(d), std::vector<FieldScalar>(d), std::vector<LieElement>(d)};
  for (std::size_t k = 0; k < d; ++k) out.order[k] = pi[t.order[k]];
  for (std::size_t j = 0; j < d; ++j) {
    out.scales[j] = t.scales[pi[j]];
    out.tails[j] = relabel(t.tails[pi[j]], pi);
  }
  return out;
}

inline LieElement certify_apply(const LieCertificate& c, std::size_t d, const FieldDescriptor& f) {
  if (c.generator >= d) throw InvalidArgument("certificate generator out of range");
  LieElement u = LieElement::generator(d, f, c.generator);
  for (const auto& a : c.chain) {
    if (arity(a) != d || !(field_of(a) == f)) throw Mismatch("certificate factor arity or field");
    u = primlen::apply(a, u);
  }
  return u;
}

/// Summand count allowed for rank d over the given field.
inline std::uint64_t lie_bound(std::size_t d, const FieldDescriptor& f) {
  if (d < 3) throw InvalidArgument("the Lie bound needs rank at least 3");
  const bool small = !f.has_more_than_two_elements();
  if (d == 3) return small ? 6 : 5;
  return small ? 7 : 6;
}

namespace detail {

inline void require_long_x1_words(const LieElement& t) {
  for (const auto& [w, c] : t.terms()) {
    if (w.length() < 3 || w.indices[1] != 0) {
      throw InvalidArgument("bucket input must consist of words of length >= 3 with i_2 = 1");
    }
  }
}

inline LieWord strip_last(const LieWord& w) {
  return LieWord(std::vector<std::uint32_t>(w.indices.begin(), w.indices.end() - 1));
}

}  // namespace detail

/// t = [w_1, x_1] + [w_2, x_2] + [w_3, x_3] by the last index of each word.
inline std::array<LieElement, 3> bucket_d3(const LieElement& t) {
  if (t.arity() != 3) throw InvalidArgument("bucket_d3 needs rank 3");
  detail::require_long_x1_words(t);
  std::array<LieElement, 3> w{LieElement(3, t.field()), LieElement(3, t.field()), LieElement(3, t.field())};
  for (const auto& [word, c] : t.terms()) w[word.indices.back()].add_normal(detail::strip_last(word), c);
  return w;
}

/// t = [w_1, x_d] + [w_2, x_{d-1}] + w_3 + w_4 with w_3 free of x_{d-1} and
/// w_4 free of x_d.
inline std::array<LieElement, 4> bucket_dgt3(const LieElement& t) {
  const auto d = t.arity();
  if (d <= 3) throw InvalidArgument("bucket_dgt3 needs rank above 3");
  detail::require_long_x1_words(t);
  const auto f = t.field();
  std::array<LieElement, 4> w{LieElement(d, f), LieElement(d, f), LieElement(d, f), LieElement(d, f)};
  for (const auto& [word, c] : t.terms()) {
    const auto last = word.indices.back();
    if (last == d - 1) {
      w[0].add_normal(detail::strip_last(word), c);
    } else if (last == d - 2) {
      w[1].add_normal(detail::strip_last(word), c);
    } else if (word.indices.front() == d - 1) {
      w[2].add_normal(word, c);
    } else {
      w[3].add_normal(word, c);
    }
  }
  return w;
}

/// Linear coefficients of the summands. Vectors are indexed by generator.
struct LieCoefficients {
  FieldScalar lead;                // x_1 coefficient of the triangular summand γ x_1 + v
  std::vector<FieldScalar> inner;  // γ of the summand γ x_k + [w, x_k]
  std::vector<FieldScalar> eta;    // d > 3: x_{d-1}, x_d coefficients next to w_3, w_4
  std::vector<FieldScalar> zeta;   // linear part of y_1 + [y_2, y_3]
  std::vector<FieldScalar> extra;  // extra linear summand, all zero when unused
  bool split = false;
};

namespace detail {

// Σ_{j>=2} z_j x_j and Σ β_j x_j linearly independent (β given for j >= 2).
inline bool independent(const std::vector<FieldScalar>& z, const std::vector<FieldScalar>& beta) {
  const auto d = z.size();
  for (std::size_t i = 1; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (!(z[i] * beta[j] - z[j] * beta[i]).is_zero()) return true;
    }
  }
  return false;
}

inline bool all_zero(const std::vector<FieldScalar>& v) {
  return std::all_of(v.begin(), v.end(), [](const auto& s) { return s.is_zero(); });
}

}  // namespace detail

/// Deterministic choice: the first candidate from a short fixed list that
/// makes every required coefficient nonzero and, when β ≠ 0, keeps the ζ
/// form independent of β. Otherwise (only over GF(2)) the quadratic summand
/// is split and a linear summand is added.
/// `beta` has length d and is indexed by generator; beta[0] is ignored.
inline LieCoefficients choose_lie_coeffs(std::size_t d, int delta, std::vector<FieldScalar> beta,
                                         const FieldDescriptor& f) {
  if (d < 3) throw InvalidArgument("choose_lie_coeffs needs rank at least 3");
  if (beta.size() != d) throw InvalidArgument("beta must have one entry per generator");
  beta[0] = FieldScalar::zero(f);
  const auto zero = FieldScalar::zero(f);
  const auto one = FieldScalar::one(f);
  const auto num = [&](long long v) { return FieldScalar::from_integer(f, v); };
  const bool need_independence = !detail::all_zero(beta);
  const std::size_t p = d == 3 ? 1 : d - 2;  // the two generators ζ may use besides x_1
  const std::size_t q = d == 3 ? 2 : d - 1;

  LieCoefficients c{one, std::vector<FieldScalar>(d, zero), std::vector<FieldScalar>(d, zero),
                    std::vector<FieldScalar>(d, zero), std::vector<FieldScalar>(d, zero), false};
  const auto accept = [&]() { return !need_independence || detail::independent(c.zeta, beta); };

  bool found = false;
  if (d == 3) {
    // x_1: ξ + ξ_1 + ζ_1 = δ;  x_2: ξ_2 + ζ_2 = 0;  x_3: ξ_3 + ζ_3 = 0
    c.inner[0] = one;
    for (auto [a, b] : std::array<std::pair<int, int>, 3>{{{1, 1}, {1, 2}, {2, 1}}}) {
      if (num(a).is_zero() || num(b).is_zero()) continue;
      c.inner[1] = num(a);
      c.inner[2] = num(b);
      c.zeta[1] = -c.inner[1];
      c.zeta[2] = -c.inner[2];
      c.zeta[0] = num(delta) - c.lead - c.inner[0];
      if (accept()) {
        found = true;
        break;
      }
    }
  } else {
    // ξ + ζ_1 = δ, η_{d-1} + ξ_{d-1} + ζ_{d-1} = 0, η_d + ξ_d + ζ_d = 0
    c.zeta[0] = num(delta) - c.lead;
    for (int e1 = 1; e1 <= 3 && !found; ++e1) {
      for (int x1 = 1; x1 <= 3 && !found; ++x1) {
        for (int e2 = 1; e2 <= 3 && !found; ++e2) {
          for (int x2 = 1; x2 <= 3 && !found; ++x2) {
            if (num(e1).is_zero() || num(x1).is_zero() || num(e2).is_zero() || num(x2).is_zero()) continue;
            c.eta[p] = num(e1);
            c.inner[p] = num(x1);
            c.eta[q] = num(e2);
            c.inner[q] = num(x2);
            c.zeta[p] = -(c.eta[p] + c.inner[p]);
            c.zeta[q] = -(c.eta[q] + c.inner[q]);
            found = accept();
          }
        }
      }
    }
  }
  if (found) return c;

  // ζ_p x_p + ζ_q x_q = (ζ'_p x_p + ζ'_q x_q) + (ζ''_p x_p + ζ''_q x_q)
  for (auto [a, b] : std::array<std::pair<int, int>, 3>{{{1, 0}, {0, 1}, {1, 1}}}) {
    std::vector<FieldScalar> z = c.zeta;
    z[p] = num(a);
    z[q] = num(b);
    const auto rest_p = c.zeta[p] - z[p];
    const auto rest_q = c.zeta[q] - z[q];
    if (rest_p.is_zero() && rest_q.is_zero()) continue;
    if (!detail::independent(z, beta)) continue;
    c.extra[p] = rest_p;
    c.extra[q] = rest_q;
    c.zeta = std::move(z);
    c.split = true;
    return c;
  }
  throw std::logic_error("no admissible coefficient choice");
}

namespace detail {

inline LieElement gen(std::size_t d, const FieldDescriptor& f, std::size_t j) {
  return LieElement::generator(d, f, j);
}

// Linear automorphism sending only x_a to the linear form c, a the first
// index with c_a ≠ 0.
inline LieCertificate linear_certificate(const std::vector<FieldScalar>& c, const FieldDescriptor& f) {
  const auto d = c.size();
  std::size_t a = 0;
  while (a < d && c[a].is_zero()) ++a;
  if (a == d) throw InvalidArgument("linear certificate needs a nonzero form");
  DenseMatrix m = DenseMatrix::identity(d, f);
  for (std::size_t i = 0; i < d; ++i) m(i, a) = c[i];
  return LieCertificate{{LinearLie{std::move(m)}}, a};
}

inline std::vector<std::size_t> order_from(std::size_t d, std::size_t first) {
  std::vector<std::size_t> order{first};
  for (std::size_t j = 0; j < d; ++j) {
    if (j != first) order.push_back(j);
  }
  return order;
}

// γ x_j + v with v free of x_j.
inline LieCertificate triangular_certificate(std::size_t j, const FieldScalar& gamma, const LieElement& v) {
  const auto d = v.arity();
  const auto f = v.field();
  TriangularLie t{order_from(d, j), std::vector<FieldScalar>(d, FieldScalar::one(f)),
                  std::vector<LieElement>(d, LieElement(d, f))};
  t.scales[j] = gamma;
  t.tails[j] = v;
  LieCertificate cert{{}, j};
  if (!is_identity(t)) cert.chain.push_back(std::move(t));
  return cert;
}

// γ x_k + [w, x_k] = γ (x_k + [x_k, -w/γ]): scale x_k, then exp(ad(-w/γ)).
inline LieCertificate inner_certificate(std::size_t k, const FieldScalar& gamma, const LieElement& w) {
  const auto d = w.arity();
  const auto f = w.field();
  LieCertificate cert{{}, k};
  if (!gamma.is_one()) {
    DenseMatrix m = DenseMatrix::identity(d, f);
    m(k, k) = gamma;
    cert.chain.push_back(LinearLie{std::move(m)});
  }
  if (!w.is_zero()) cert.chain.push_back(InnerLie{w * (-gamma.inverse())});
  return cert;
}

// y_1 + [y_2, y_3] with y_1 = Σ ζ_j x_j, y_2 = Σ β_j x_j, y_3 = x_1: the
// triangular map x_a -> x_a + [x_b, x_c] followed by the linear map sending
// x_a, x_b, x_c to y_1, y_2, y_3; a < b < c is the first triple with a
// nonzero 3x3 minor.
inline LieCertificate quadratic_certificate(const std::vector<FieldScalar>& zeta,
                                            const std::vector<FieldScalar>& beta,
                                            const FieldDescriptor& f) {
  const auto d = zeta.size();
  std::vector<FieldScalar> y3(d, FieldScalar::zero(f));
  y3[0] = FieldScalar::one(f);
  const std::array<const std::vector<FieldScalar>*, 3> y{&zeta, &beta, &y3};
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      for (std::size_t c = b + 1; c < d; ++c) {
        const std::array<std::size_t, 3> rows{a, b, c};
        DenseMatrix minor(3, 3, f);
        for (std::size_t r = 0; r < 3; ++r) {
          for (std::size_t s = 0; s < 3; ++s) minor(r, s) = (*y[s])[rows[r]];
        }
        if (bareiss_determinant(minor).value.is_zero()) continue;
        TriangularLie t{order_from(d, a), std::vector<FieldScalar>(d, FieldScalar::one(f)),
                        std::vector<LieElement>(d, LieElement(d, f))};
        t.tails[a] = bracket(gen(d, f, b), gen(d, f, c));
        DenseMatrix m = DenseMatrix::identity(d, f);
        for (std::size_t s = 0; s < 3; ++s) {
          for (std::size_t i = 0; i < d; ++i) m(i, rows[s]) = (*y[s])[i];
        }
        return LieCertificate{{std::move(t), LinearLie{std::move(m)}}, a};
      }
    }
  }
  throw InvalidArgument("y_1, y_2, x_1 are linearly dependent");
}

}  // namespace detail

/// Splits g (linear part δ x_1, δ ∈ {0, 1}) into certified summands.
inline std::vector<LieCertificate> decompose_normalized(const LieElement& g, int delta) {
  const auto d = g.arity();
  const auto f = g.field();
  const auto parts = split_parts(g);

  std::vector<FieldScalar> beta(d, FieldScalar::zero(f));
  LieElement t(d, f);
  for (const auto& [w, c] : parts.x1_commutator.terms()) {
    if (w.length() == 2) {
      beta[w.indices[0]] = c;
    } else {
      t.add_normal(w, c);
    }
  }
  const auto co = choose_lie_coeffs(d, delta, beta, f);

  std::vector<LieCertificate> certs;
  certs.push_back(detail::triangular_certificate(0, co.lead, parts.non_x1_commutator));
  if (d == 3) {
    const auto w = bucket_d3(t);
    for (std::size_t k = 0; k < 3; ++k) certs.push_back(detail::inner_certificate(k, co.inner[k], w[k]));
  } else {
    const auto w = bucket_dgt3(t);
    certs.push_back(detail::triangular_certificate(d - 2, co.eta[d - 2], w[2]));
    certs.push_back(detail::triangular_certificate(d - 1, co.eta[d - 1], w[3]));
    certs.push_back(detail::inner_certificate(d - 1, co.inner[d - 1], w[0]));
    certs.push_back(detail::inner_certificate(d - 2, co.inner[d - 2], w[1]));
  }
  if (!detail::all_zero(beta)) {
    certs.push_back(detail::quadratic_certificate(co.zeta, beta, f));
  } else if (!detail::all_zero(co.zeta)) {
    certs.push_back(detail::linear_certificate(co.zeta, f));
  }
  if (!detail::all_zero(co.extra)) certs.push_back(detail::linear_certificate(co.extra, f));
  return certs;
}

inline constexpr const char* kLieEmptySumNote =
    "zero is decomposed as the empty sum (additive primitive length 0)";

inline LieDecomposition decompose_lie(const LieElement& f) {
  const auto d = f.arity();
  const auto fd = f.field();
  if (d < 3) throw Unsupported("Lie decomposition needs rank at least 3 (got " + std::to_string(d) + ")");
  LieDecomposition dec{f, {}, lie_bound(d, fd), {}};
  if (f.degree() > degree_cap()) throw DegreeCapExceeded("input degree exceeds the degree cap");
  if (f.is_zero()) {
    dec.note = kLieEmptySumNote;
    return dec;
  }
  const auto c = linear_coefficients(f);
  if (f.degree() == 1) {
    dec.summands.push_back({f, detail::linear_certificate(c, fd)});
    return dec;
  }

  // f = M(π(g)) with M: x_piv -> linear part of f and π swapping x_1, x_piv;
  // g has linear part δ x_1. M lists a single image, so it is only appended
  // where that image is used.
  std::size_t piv = 0;
  while (piv < d && c[piv].is_zero()) ++piv;
  std::vector<std::size_t> pi(d);
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  std::optional<LinearLie> m;
  LieElement g = f;
  int delta = 0;
  if (piv < d) {
    delta = 1;
    std::swap(pi[0], pi[piv]);
    DenseMatrix mat = DenseMatrix::identity(d, fd);
    for (std::size_t i = 0; i < d; ++i) mat(i, piv) = c[i];
    if (!(mat == DenseMatrix::identity(d, fd))) {
      LinearLie mm{std::move(mat)};
      g = primlen::apply(invert(mm), g);
      m = std::move(mm);
    }
    g = relabel(g, pi);
  }

  for (auto& cert : decompose_normalized(g, delta)) {
    LieCertificate out{{}, pi[cert.generator]};
    for (const auto& a : cert.chain) out.chain.push_back(conjugate(a, pi));
    LieElement u = certify_apply(out, d, fd);
    if (m && u.uses_generator(piv)) {
      out.chain.push_back(*m);
      u = primlen::apply(*m, u);
    }
    dec.summands.push_back({std::move(u), std::move(out)});
  }
  return dec;
}

struct LieVerifyReport {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const noexcept { return ok; }
  static LieVerifyReport fail(std::string why) { return {false, std::move(why)}; }
};

inline LieVerifyReport verify_lie(const LieDecomposition& dec) {
  const auto& f = dec.input;
  const auto d = f.arity();
  const auto fd = f.field();
  if (d < 3) return LieVerifyReport::fail("rank below 3");
  const auto expected = lie_bound(d, fd);
  if (dec.bound != expected) return LieVerifyReport::fail("bound mismatch");
  if (dec.summands.size() > expected) return LieVerifyReport::fail("summand count exceeds bound");

  LieElement total(d, fd);
  for (const auto& s : dec.summands) {
    if (s.summand.arity() != d || !(s.summand.field() == fd)) {
      return LieVerifyReport::fail("summand arity or field mismatch");
    }
    total += s.summand;
  }
  if (!(total == f)) return LieVerifyReport::fail("sum mismatch");

  for (std::size_t k = 0; k < dec.summands.size(); ++k) {
    const auto& cert = dec.summands[k].certificate;
    const auto where = " in summand " + std::to_string(k + 1);
    if (cert.generator >= d) return LieVerifyReport::fail("certificate generator out of range" + where);
    for (const auto& a : cert.chain) {
      if (arity(a) != d || !(field_of(a) == fd)) {
        return LieVerifyReport::fail("invalid elementary factor" + where + ": arity or field mismatch");
      }
      if (auto err = validate(a)) return LieVerifyReport::fail("invalid elementary factor" + where + ": " + *err);
    }
    if (!(certify_apply(cert, d, fd) == dec.summands[k].summand)) {
      return LieVerifyReport::fail("certificate replay mismatch" + where);
    }
  }
  return {};
}

}  // namespace primlen
