#include <gtest/gtest.h>

#include <set>

#include "primlen/format.hpp"
#include "primlen/parse.hpp"
#include "primlen/polydecomp.hpp"
#include "support.hpp"

namespace primlen {
namespace {

const auto Q = FieldDescriptor::rationals();

Polynomial P(const char* s, std::size_t d = 2) { return parse_poly(s, d, Q); }
FieldScalar q(long n, long d = 1) { return FieldScalar::from_rational(Q, mpz_class(n), mpz_class(d)); }

TEST(PolyDecomp, Bound) {
  EXPECT_EQ(plength_bound(2, 2), 3u);
  EXPECT_EQ(plength_bound(2, 3), 6u);
  EXPECT_EQ(plength_bound(5, 2), 6u);
  EXPECT_EQ(plength_bound(6, 4), 84u);
  EXPECT_THROW(plength_bound(1, 3), InvalidArgument);
}

TEST(PolyDecomp, ExponentCode) {
  EXPECT_EQ(exponent_code(Monomial({1, 1, 0}), 2), 4u);
  EXPECT_EQ(exponent_code(Monomial({0, 0, 0}), 2), 0u);
  std::set<std::uint64_t> codes;
  std::size_t count = 0;
  for (std::uint32_t a = 0; a <= 3; ++a) {
    for (std::uint32_t b = 0; a + b <= 3; ++b) {
      const Monomial m({a, b});
      codes.insert(exponent_code(m, 3));
      EXPECT_EQ(exponent_code(m, 3), a + 4 * alpha_exponent(m, 3));
      ++count;
    }
  }
  EXPECT_EQ(count, 10u);
  EXPECT_EQ(codes.size(), 10u);
}

TEST(PolyDecomp, Nodes) {
  EXPECT_EQ(choose_alphas(3, Q), (std::vector<FieldScalar>{q(2), q(3), q(4)}));
  EXPECT_EQ(choose_alphas(1, Q), (std::vector<FieldScalar>{q(2)}));
  EXPECT_THROW(choose_alphas(2, FieldDescriptor::prime(5)), Unsupported);
}

TEST(PolyDecomp, Linearize) {
  const auto f = P("x1^2*x2 + 4");
  const auto l0 = linearize(f);
  EXPECT_FALSE(l0.psi.has_value());
  EXPECT_EQ(l0.g, f);

  const auto l1 = linearize(P("3*x2 + x1^2"));
  ASSERT_TRUE(l1.psi.has_value());
  EXPECT_EQ(homogeneous_component(l1.g, 1), P("x1"));

  const auto l2 = linearize(P("x1"));
  EXPECT_FALSE(l2.psi.has_value());
  EXPECT_EQ(l2.g, P("x1"));

  testing::Rng rng(2);
  for (int it = 0; it < 200; ++it) {
    auto g = testing::random_poly(rng, 3, 3, Q, 6, 20);
    const auto l = linearize(g);
    const auto lin = homogeneous_component(l.g, 1);
    ASSERT_TRUE(lin.is_zero() || lin == Polynomial::variable(3, Q, 0));
    if (l.psi) ASSERT_EQ(primlen::apply(invert(*l.psi), l.g), g);
  }
}

TEST(PolyDecomp, LinearCoefficients) {
  EXPECT_EQ(assign_linear_coeffs(3, 1, Q), (std::vector<FieldScalar>{q(1), q(1), q(-1)}));
  EXPECT_EQ(assign_linear_coeffs(3, 0, Q), (std::vector<FieldScalar>{q(1), q(1), q(-2)}));
  EXPECT_EQ(assign_linear_coeffs(2, 1, Q), (std::vector<FieldScalar>{q(2), q(-1)}));
  for (std::uint64_t n = 1; n < 40; ++n) {
    for (int delta : {0, 1}) {
      if (n == 1 && delta == 0) continue;
      const auto xi = assign_linear_coeffs(n, delta, Q);
      FieldScalar total = q(0);
      for (const auto& x : xi) {
        ASSERT_FALSE(x.is_zero());
        total += x;
      }
      ASSERT_EQ(total, q(delta));
    }
  }
}

// Σ_k ξ_k s(α_k)^p computed directly, for comparison with g_p.
Polynomial reexpand(const std::vector<FieldScalar>& xi, const std::vector<FieldScalar>& alphas, std::uint64_t p,
                    std::uint64_t n, std::size_t d) {
  Polynomial out(d, Q);
  for (std::size_t k = 0; k < alphas.size(); ++k) out += xi[k] * pow(build_s(alphas[k], n, d), p);
  return out;
}

TEST(PolyDecomp, SolveDegree) {
  const auto alphas = choose_alphas(4, Q);
  const auto zero = solve_degree(2, Polynomial(2, Q), alphas, 3);
  for (const auto& x : zero.xi) EXPECT_TRUE(x.is_zero());

  const auto a3 = choose_alphas(3, Q);
  const auto sq = solve_degree(2, P("x1^2"), a3, 2);
  EXPECT_EQ(reexpand(sq.xi, a3, 2, 2, 2), P("x1^2"));

  const auto cube = solve_degree(3, P("x1*x2^2"), alphas, 3);
  EXPECT_EQ(reexpand(cube.xi, alphas, 3, 3, 2), P("x1*x2^2"));

  EXPECT_THROW(solve_degree(2, P("x1^2 + x2"), a3, 2), InvalidArgument);
}

TEST(PolyDecomp, SolveDegreeReexpandsRandomComponents) {
  testing::Rng rng(23);
  for (int it = 0; it < 60; ++it) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 2, 3));
    const std::uint64_t n = static_cast<std::uint64_t>(testing::uniform(rng, 2, 4));
    const std::uint64_t p = static_cast<std::uint64_t>(testing::uniform(rng, 2, static_cast<long long>(n)));
    const auto alphas = choose_alphas(plength_bound(n, d), Q);
    const auto g = homogeneous_component(testing::random_poly(rng, d, p, Q, 8), p);
    const auto sol = solve_degree(p, g, alphas, n);
    ASSERT_EQ(reexpand(sol.xi, alphas, p, n, d), g);
  }
}

TEST(PolyDecomp, DegenerateCases) {
  const auto zero = decompose(Polynomial(2, Q));
  EXPECT_EQ(zero.status, DecompositionStatus::Finite);
  EXPECT_TRUE(zero.summands.empty());
  EXPECT_FALSE(zero.note.empty());
  EXPECT_TRUE(verify(zero));

  const auto c = decompose(P("7"));
  ASSERT_EQ(c.summands.size(), 2u);
  EXPECT_EQ(to_string(c.summands[0].summand), "x1 + 7");
  EXPECT_EQ(to_string(c.summands[1].summand), "-x1");
  EXPECT_TRUE(verify(c));

  const auto lin = decompose(P("3*x2 - x1 + 1/2"));
  ASSERT_EQ(lin.summands.size(), 1u);
  EXPECT_EQ(lin.summands[0].certificate.chain.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<AffineAuto>(lin.summands[0].certificate.chain[0]));
  EXPECT_TRUE(verify(lin));

  const auto inf = decompose(P("x1^2", 1));
  EXPECT_EQ(inf.status, DecompositionStatus::Infinite);
  EXPECT_FALSE(inf.bound.has_value());
  EXPECT_TRUE(verify(inf));

  EXPECT_THROW(decompose(parse_poly("x1^2", 2, FieldDescriptor::prime(3))), Unsupported);
}

TEST(PolyDecomp, SmallExample) {
  const auto dec = decompose(P("x1^2 + x2"));
  EXPECT_EQ(dec.status, DecompositionStatus::Finite);
  EXPECT_LE(dec.summands.size(), 3u);
  EXPECT_TRUE(verify(dec)) << verify(dec).diagnostic;
}

TEST(PolyDecomp, RandomEndToEnd) {
  testing::Rng rng(29);
  for (int it = 0; it < 80; ++it) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 2, 3));
    const std::uint64_t n = static_cast<std::uint64_t>(testing::uniform(rng, 2, 4));
    const auto f = testing::random_poly(rng, d, n, Q);
    const auto dec = decompose(f);
    ASSERT_EQ(dec.status, DecompositionStatus::Finite);
    ASSERT_LE(dec.summands.size(), plength_bound(n, d));
    const auto r = verify(dec);
    ASSERT_TRUE(r) << to_string(f) << ": " << r.diagnostic;
  }
}

TEST(PolyDecomp, VerifyRejectsTampering) {
  const auto dec = decompose(P("x1^2 - 3*x1*x2 + x2 + 5"));
  ASSERT_TRUE(verify(dec));

  auto bumped = dec;
  auto& s = bumped.summands[0].summand;
  const Monomial first = s.terms().begin()->first;
  s.add_term(first, q(1));
  const auto r1 = verify(bumped);
  EXPECT_FALSE(r1);
  EXPECT_EQ(r1.diagnostic, "sum mismatch");

  auto zeroed = dec;
  bool hit = false;
  for (auto& summand : zeroed.summands) {
    for (auto& a : summand.certificate.chain) {
      if (auto* t = std::get_if<TriangularAuto>(&a)) {
        t->scales[0] = q(0);
        hit = true;
        break;
      }
    }
    if (hit) break;
  }
  ASSERT_TRUE(hit);
  const auto r2 = verify(zeroed);
  EXPECT_FALSE(r2);
  EXPECT_NE(r2.diagnostic.find("invalid elementary factor"), std::string::npos) << r2.diagnostic;

  auto extra = dec;
  extra.summands.push_back(extra.summands.back());
  extra.summands.push_back(extra.summands.back());
  EXPECT_EQ(verify(extra).diagnostic, "summand count exceeds bound");

  auto wrong_bound = dec;
  wrong_bound.bound = 99;
  EXPECT_EQ(verify(wrong_bound).diagnostic, "bound mismatch");

  auto infinite = dec;
  infinite.status = DecompositionStatus::Infinite;
  EXPECT_FALSE(verify(infinite));
}

}  // namespace
}  // namespace primlen
