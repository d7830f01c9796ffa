#include <gtest/gtest.h>

#include "primlen/parse.hpp"
#include "primlen/polyauto.hpp"
#include "support.hpp"

namespace primlen {
namespace {

const auto Q = FieldDescriptor::rationals();

Polynomial P(const char* s, std::size_t d = 2) { return parse_poly(s, d, Q); }
FieldScalar q(long n, long d = 1) { return FieldScalar::from_rational(Q, mpz_class(n), mpz_class(d)); }

// x_1 -> x_1 + x_2 (d = 2)
AffineAuto shear() {
  auto a = affine_identity(2, Q);
  a.matrix(1, 0) = q(1);
  return a;
}

TriangularAuto random_triangular(testing::Rng& rng, std::size_t d, const FieldDescriptor& f) {
  std::vector<FieldScalar> scales;
  std::vector<Polynomial> tails;
  for (std::size_t j = 0; j < d; ++j) {
    scales.push_back(testing::random_nonzero(rng, f, 5));
    Polynomial t(d, f);
    for (int k = 0; k < 3; ++k) {
      Monomial m(d);
      for (std::size_t i = j + 1; i < d; ++i) m.exponents[i] = static_cast<std::uint32_t>(testing::uniform(rng, 0, 1));
      if (m.degree() <= 3) t.add_term(m, testing::random_scalar(rng, f, 5));
    }
    tails.push_back(std::move(t));
  }
  return make_triangular(std::move(scales), std::move(tails));
}

AffineAuto random_affine(testing::Rng& rng, std::size_t d, const FieldDescriptor& f) {
  for (;;) {
    AffineAuto a = affine_identity(d, f);
    for (std::size_t i = 0; i < d; ++i) {
      a.shift[i] = testing::random_scalar(rng, f, 5);
      for (std::size_t j = 0; j < d; ++j) a.matrix(i, j) = testing::random_scalar(rng, f, 5);
    }
    if (!validate(a)) return a;
  }
}

TEST(PolyAuto, Apply) {
  EXPECT_EQ(primlen::apply(shear(), P("x1*x2")), P("x1*x2 + x2^2"));
  const auto t = triangular_on_first(2, q(2), P("x2^2"));
  EXPECT_EQ(primlen::apply(t, P("x1")), P("2*x1 + x2^2"));
}

TEST(PolyAuto, Invert) {
  const auto inv = std::get<AffineAuto>(invert(shear()));
  EXPECT_EQ(images(inv)[0], P("x1 - x2"));
  EXPECT_EQ(images(inv)[1], P("x2"));
  const auto tinv = invert(triangular_on_first(2, q(2), P("x2^2")));
  EXPECT_EQ(images(tinv)[0], P("1/2*x1 - 1/2*x2^2"));
}

TEST(PolyAuto, Validate) {
  auto singular = affine_identity(2, Q);
  singular.matrix(0, 0) = q(0);
  EXPECT_TRUE(validate(singular).has_value());

  TriangularAuto bad{{q(1), q(1)}, {P("x1"), Polynomial(2, Q)}};
  EXPECT_TRUE(validate(bad).has_value());
  bad.tails[0] = P("x2^3");
  EXPECT_FALSE(validate(bad).has_value());
  bad.scales[1] = q(0);
  EXPECT_TRUE(validate(bad).has_value());
  EXPECT_THROW(make_triangular(bad.scales, bad.tails), InvalidArgument);
}

TEST(PolyAuto, CertificateReplay) {
  // θ: x1 -> x1 + x2^2, then φ: x2 -> x1 + 2 x2
  auto phi = affine_identity(2, Q);
  phi.matrix(0, 1) = q(1);
  phi.matrix(1, 1) = q(2);
  const PolyCertificate c{{triangular_on_first(2, q(1), P("x2^2")), phi}, 0};
  EXPECT_EQ(certify_apply(c, 2, Q), P("x1 + (x1 + 2*x2)^2"));
  EXPECT_EQ(certify_apply(PolyCertificate{{}, 0}, 2, Q), P("x1"));
  EXPECT_THROW(certify_apply(PolyCertificate{{}, 2}, 2, Q), InvalidArgument);
}

TEST(PolyAuto, InverseRoundTrips) {
  testing::Rng rng(17);
  for (int it = 0; it < 1000; ++it) {
    const std::size_t d = 3;
    const ElementaryPolyAuto a = it % 2 == 0 ? ElementaryPolyAuto(random_triangular(rng, d, Q))
                                             : ElementaryPolyAuto(random_affine(rng, d, Q));
    const auto b = invert(a);
    ASSERT_FALSE(validate(b).has_value());
    for (std::size_t j = 0; j < d; ++j) {
      ASSERT_EQ(certify_apply(PolyCertificate{{a, b}, j}, d, Q), Polynomial::variable(d, Q, j));
      ASSERT_EQ(certify_apply(PolyCertificate{{b, a}, j}, d, Q), Polynomial::variable(d, Q, j));
    }
  }
}

TEST(PolyAuto, ChainOrderIsInnermostFirst) {
  testing::Rng rng(19);
  for (int it = 0; it < 200; ++it) {
    const auto a = random_triangular(rng, 3, Q);
    const auto b = random_affine(rng, 3, Q);
    const auto x1 = Polynomial::variable(3, Q, 0);
    // chain [a, b] stands for b(a(x1)), with b acting on the images of a
    ASSERT_EQ(certify_apply(PolyCertificate{{a, b}, 0}, 3, Q), primlen::apply(b, primlen::apply(a, x1)));
  }
}

}  // namespace
}  // namespace primlen
