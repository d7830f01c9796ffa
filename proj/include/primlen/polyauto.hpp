#pragma once

// Elementary automorphisms of K[x_1..x_d] and certificates built from them.
//
// A certificate is a chain of elementary automorphisms listed innermost
// first together with a generator x_j. It certifies the polynomial
// chain[m-1](...chain[1](chain[0](x_j))...), i.e. for the chain [θ, φ] the
// element φ∘θ(x_j) with θ acting first.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "primlen/error.hpp"
#include "primlen/field.hpp"
#include "primlen/linalg.hpp"
#include "primlen/multipoly.hpp"

namespace primlen {

/// x_j -> shift[j] + sum_i matrix(i, j) x_i; column j holds the image of x_j.
struct AffineAuto {
  DenseMatrix matrix;
  std::vector<FieldScalar> shift;

  friend bool operator==(const AffineAuto&, const AffineAuto&) = default;
};

/// x_j -> scales[j] x_j + tails[j](x_{j+1}, ..., x_d).
struct TriangularAuto {
  std::vector<FieldScalar> scales;
  std::vector<Polynomial> tails;

  friend bool operator==(const TriangularAuto&, const TriangularAuto&) = default;
};

using ElementaryPolyAuto = std::variant<AffineAuto, TriangularAuto>;

struct PolyCertificate {
  std::vector<ElementaryPolyAuto> chain;
  std::size_t generator = 0;  // 0-based

  friend bool operator==(const PolyCertificate&, const PolyCertificate&) = default;
};

inline std::size_t arity(const ElementaryPolyAuto& a) {
  if (auto* af = std::get_if<AffineAuto>(&a)) return af->matrix.cols();
  return std::get<TriangularAuto>(a).scales.size();
}

inline FieldDescriptor field_of(const ElementaryPolyAuto& a) {
  if (auto* af = std::get_if<AffineAuto>(&a)) return af->matrix.field();
  const auto& t = std::get<TriangularAuto>(a);
  return t.scales.empty() ? FieldDescriptor{} : t.scales.front().field();
}

/// Returns a diagnostic when `a` is not a valid elementary automorphism.
inline std::optional<std::string> validate(const ElementaryPolyAuto& a) {
  if (auto* af = std::get_if<AffineAuto>(&a)) {
    const auto d = af->matrix.rows();
    if (!af->matrix.is_square() || af->shift.size() != d) return "affine factor has wrong shape";
    for (const auto& s : af->shift) {
      if (!(s.field() == af->matrix.field())) return "affine shift field mismatch";
    }
    if (bareiss_determinant(af->matrix).value.is_zero()) return "affine matrix is singular";
    return std::nullopt;
  }
  const auto& t = std::get<TriangularAuto>(a);
  const auto d = t.scales.size();
  if (t.tails.size() != d || d == 0) return "triangular factor has wrong shape";
  const auto f = t.scales.front().field();
  for (std::size_t j = 0; j < d; ++j) {
    if (!(t.scales[j].field() == f) || !(t.tails[j].field() == f) || t.tails[j].arity() != d) {
      return "triangular factor field or arity mismatch";
    }
    if (t.scales[j].is_zero()) return "triangular scale is zero";
    if (!t.tails[j].only_uses_variables_from(j + 1)) {
      return "triangular tail of x" + std::to_string(j + 1) + " uses x1..x" + std::to_string(j + 1);
    }
  }
  return std::nullopt;
}

inline AffineAuto make_affine(DenseMatrix matrix, std::vector<FieldScalar> shift) {
  AffineAuto a{std::move(matrix), std::move(shift)};
  if (auto err = validate(a)) throw InvalidArgument(*err);
  return a;
}

inline AffineAuto affine_identity(std::size_t d, const FieldDescriptor& f) {
  return AffineAuto{DenseMatrix::identity(d, f), std::vector<FieldScalar>(d, FieldScalar::zero(f))};
}

inline TriangularAuto make_triangular(std::vector<FieldScalar> scales, std::vector<Polynomial> tails) {
  TriangularAuto t{std::move(scales), std::move(tails)};
  if (auto err = validate(t)) throw InvalidArgument(*err);
  return t;
}

/// Triangular automorphism moving only x_1: x_1 -> scale x_1 + tail.
inline TriangularAuto triangular_on_first(std::size_t d, const FieldScalar& scale, Polynomial tail) {
  const auto f = scale.field();
  std::vector<FieldScalar> scales(d, FieldScalar::one(f));
  std::vector<Polynomial> tails(d, Polynomial(d, f));
  scales[0] = scale;
  tails[0] = std::move(tail);
  return make_triangular(std::move(scales), std::move(tails));
}

/// Generator images x_1 .. x_d.
inline std::vector<Polynomial> images(const ElementaryPolyAuto& a) {
  const auto d = arity(a);
  const auto f = field_of(a);
  std::vector<Polynomial> out;
  out.reserve(d);
  if (auto* af = std::get_if<AffineAuto>(&a)) {
    for (std::size_t j = 0; j < d; ++j) {
      Polynomial img = Polynomial::constant(d, af->shift.at(j));
      for (std::size_t i = 0; i < d; ++i) {
        img.add_term(Monomial::variable(d, i), af->matrix(i, j));
      }
      out.push_back(std::move(img));
    }
    return out;
  }
  const auto& t = std::get<TriangularAuto>(a);
  for (std::size_t j = 0; j < d; ++j) {
    Polynomial img = t.tails[j];
    img.add_term(Monomial::variable(d, j), t.scales[j]);
    out.push_back(std::move(img));
  }
  return out;
}

inline Polynomial apply(const ElementaryPolyAuto& a, const Polynomial& f) {
  if (f.arity() != arity(a)) throw Mismatch("automorphism arity differs from polynomial arity");
  return substitute(f, images(a));
}

inline ElementaryPolyAuto invert(const ElementaryPolyAuto& a) {
  if (auto* af = std::get_if<AffineAuto>(&a)) {
    // x -> x C + b (row vectors) inverts to y -> y C^{-1} - b C^{-1}.
    DenseMatrix inv = inverse(af->matrix);
    const auto d = inv.rows();
    std::vector<FieldScalar> shift(d, FieldScalar::zero(inv.field()));
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) shift[j] -= af->shift[i] * inv(i, j);
    }
    return AffineAuto{std::move(inv), std::move(shift)};
  }
  const auto& t = std::get<TriangularAuto>(a);
  const auto d = t.scales.size();
  const auto f = field_of(a);
  // Back substitution from x_d down: x_j -> (x_j - v_j(images of x_{j+1..d})) / γ_j.
  auto imgs = identity_images(d, f);
  std::vector<FieldScalar> scales(d);
  std::vector<Polynomial> tails(d);
  for (std::size_t j = d; j-- > 0;) {
    const FieldScalar inv = t.scales[j].inverse();
    tails[j] = substitute(t.tails[j], imgs) * (-inv);
    scales[j] = inv;
    Polynomial img = tails[j];
    img.add_term(Monomial::variable(d, j), inv);
    imgs[j] = std::move(img);
  }
  return TriangularAuto{std::move(scales), std::move(tails)};
}

/// Generator images of chain[m-1] ∘ ... ∘ chain[first] (innermost first).
inline std::vector<Polynomial> compose_images(const std::vector<ElementaryPolyAuto>& chain,
                                              std::size_t first, std::size_t d,
                                              const FieldDescriptor& f) {
  auto composite = identity_images(d, f);
  for (std::size_t t = chain.size(); t-- > first;) {
    auto step = images(chain[t]);
    for (auto& img : step) img = substitute(img, composite);
    composite = std::move(step);
  }
  return composite;
}

/// The polynomial a certificate stands for. `d` and `f` are needed for the
/// empty chain.
inline Polynomial certify_apply(const PolyCertificate& c, std::size_t d, const FieldDescriptor& f) {
  if (c.generator >= d) throw InvalidArgument("certificate generator out of range");
  for (const auto& a : c.chain) {
    if (arity(a) != d || !(field_of(a) == f)) throw Mismatch("certificate factor arity or field");
  }
  if (c.chain.empty()) return Polynomial::variable(d, f, c.generator);
  // Substitute the (small) composite of the outer factors into the innermost
  // image; cheaper than pushing a large polynomial through each factor.
  const auto inner = images(c.chain.front());
  return substitute(inner[c.generator], compose_images(c.chain, 1, d, f));
}

}  // namespace primlen
