#include <gtest/gtest.h>

#include "primlen/linalg.hpp"
#include "primlen/polydecomp.hpp"
#include "support.hpp"

namespace primlen {
namespace {

const auto Q = FieldDescriptor::rationals();

FieldScalar q(long n, long d = 1) { return FieldScalar::from_rational(Q, mpz_class(n), mpz_class(d)); }

DenseMatrix random_integer_matrix(testing::Rng& rng, std::size_t n, const FieldDescriptor& f, long long bound) {
  DenseMatrix m(n, n, f);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = FieldScalar::from_integer(f, testing::uniform(rng, -bound, bound));
  }
  return m;
}

TEST(Bareiss, SmallDeterminants) {
  EXPECT_EQ(bareiss_determinant(DenseMatrix::from_integers(Q, {{1, 2}, {3, 4}})).value, q(-2));
  EXPECT_EQ(bareiss_determinant(DenseMatrix::identity(4, Q)).value, q(1));
  // needs a row swap
  EXPECT_EQ(bareiss_determinant(DenseMatrix::from_integers(Q, {{0, 1}, {1, 0}})).value, q(-1));
  EXPECT_TRUE(bareiss_determinant(DenseMatrix::from_integers(Q, {{1, 2}, {2, 4}})).value.is_zero());
  EXPECT_EQ(bareiss_determinant(DenseMatrix(0, 0, Q)).value, q(1));
  // the second pivot of a column pair vanishes and forces a swap
  EXPECT_EQ(bareiss_determinant(DenseMatrix::from_integers(Q, {{1, 2, 3}, {2, 4, 5}, {0, 1, 1}})).value, q(1));
  EXPECT_TRUE(bareiss_determinant(DenseMatrix::from_integers(Q, {{1, 2, 3}, {2, 4, 5}, {3, 6, 1}})).value.is_zero());
  const auto f5 = FieldDescriptor::prime(5);
  EXPECT_EQ(bareiss_determinant(DenseMatrix::from_integers(f5, {{1, 2, 3}, {2, 4, 5}, {0, 1, 1}})).value,
            FieldScalar::one(f5));
}

TEST(Bareiss, MatchesCofactorOracle) {
  testing::Rng rng(3);
  for (const char* field : {"Q", "F3", "F101"}) {
    const auto f = FieldDescriptor::parse(field);
    for (int it = 0; it < 200; ++it) {
      const auto n = static_cast<std::size_t>(testing::uniform(rng, 1, 6));
      auto m = random_integer_matrix(rng, n, f, 9);
      if (it % 3 == 0) {
        for (std::size_t i = 0; i < n; ++i) m(i, i) = testing::random_scalar(rng, f, 7);
      }
      const auto r = bareiss_determinant(m);
      ASSERT_EQ(r.value, testing::cofactor_determinant(m)) << field << " n=" << n;
      ASSERT_TRUE(r.fraction_free);
    }
  }
}

TEST(Bareiss, RationalEntries) {
  testing::Rng rng(4);
  for (int it = 0; it < 100; ++it) {
    DenseMatrix m(4, 4, Q);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = testing::random_scalar(rng, Q, 12);
    }
    ASSERT_EQ(bareiss_determinant(m).value, testing::cofactor_determinant(m));
  }
}

TEST(Solve, Examples) {
  const auto a = DenseMatrix::from_integers(Q, {{2, 1}, {-1, 1}});
  const std::vector<FieldScalar> b{q(3), q(0)};
  EXPECT_EQ(solve_square(a, b).x, (std::vector<FieldScalar>{q(1), q(1)}));

  const std::vector<FieldScalar> c{q(1, 2), q(-7), q(0), q(5, 3)};
  EXPECT_EQ(solve_square(DenseMatrix::identity(4, Q), c).x, c);

  EXPECT_THROW(solve_square(DenseMatrix::from_integers(Q, {{1, 2}, {2, 4}}), b), SingularMatrix);
  EXPECT_THROW(solve_square(a, c), Mismatch);
}

TEST(Solve, ResidualIsZeroAndMatchesRationalOracle) {
  testing::Rng rng(6);
  for (int it = 0; it < 300; ++it) {
    DenseMatrix a(6, 6, Q);
    std::vector<std::vector<mpq_class>> plain(6, std::vector<mpq_class>(6));
    std::vector<FieldScalar> b;
    std::vector<mpq_class> plain_b;
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        a(i, j) = testing::random_scalar(rng, Q, 30);
        plain[i][j] = a(i, j).rational();
      }
      b.push_back(testing::random_scalar(rng, Q, 30));
      plain_b.push_back(b.back().rational());
    }
    const auto oracle = testing::rational_solve(plain, plain_b);
    if (oracle.empty()) {
      ASSERT_THROW(solve_square(a, b), SingularMatrix);
      continue;
    }
    const auto r = solve_square(a, b);
    ASSERT_TRUE(r.fraction_free);
    ASSERT_EQ(a * std::span<const FieldScalar>(r.x), b);
    for (std::size_t i = 0; i < 6; ++i) ASSERT_EQ(r.x[i].rational(), oracle[i]);
  }
}

TEST(Solve, PrimeField) {
  const auto f = FieldDescriptor::prime(101);
  testing::Rng rng(9);
  for (int it = 0; it < 300; ++it) {
    const auto a = random_integer_matrix(rng, 5, f, 100);
    std::vector<FieldScalar> b;
    for (int i = 0; i < 5; ++i) b.push_back(testing::random_scalar(rng, f));
    if (testing::cofactor_determinant(a).is_zero()) {
      ASSERT_THROW(solve_square(a, b), SingularMatrix);
    } else {
      ASSERT_EQ(a * std::span<const FieldScalar>(solve_square(a, b).x), b);
    }
  }
}

TEST(Solve, OperationCountIsCubic) {
  testing::Rng rng(12);
  for (std::size_t n : {8u, 16u, 32u}) {
    const auto a = random_integer_matrix(rng, n, Q, 50);
    std::vector<FieldScalar> b;
    for (std::size_t i = 0; i < n; ++i) b.push_back(FieldScalar::from_integer(Q, testing::uniform(rng, -50, 50)));
    const auto r = solve_square(a, b);
    ASSERT_TRUE(r.fraction_free);
    EXPECT_LE(r.ops.multiplications + r.ops.divisions, 2 * n * n * n);
  }
}

TEST(Vandermonde, Examples) {
  const std::vector<FieldScalar> two_three{q(2), q(3)};
  const std::vector<std::uint64_t> e01{0, 1};
  const auto m = vandermonde_power_matrix(two_three, e01);
  EXPECT_EQ(m(0, 0), q(1));
  EXPECT_EQ(m(0, 1), q(1));
  EXPECT_EQ(m(1, 0), q(2));
  EXPECT_EQ(m(1, 1), q(3));

  const std::vector<FieldScalar> two{q(2)};
  const std::vector<std::uint64_t> e5{5};
  EXPECT_EQ(vandermonde_power_matrix(two, e5)(0, 0), q(32));

  const std::vector<std::uint64_t> unsorted{1, 0};
  EXPECT_THROW(vandermonde_power_matrix(two_three, unsorted), InvalidArgument);
  const std::vector<FieldScalar> dup{q(2), q(2)};
  EXPECT_THROW(vandermonde_power_matrix(dup, e01), InvalidArgument);
}

TEST(Vandermonde, AllFourByFourMinorsAreNonzero) {
  const auto alphas = choose_alphas(4, Q);
  int count = 0;
  for (std::uint64_t a = 0; a <= 12; ++a) {
    for (std::uint64_t b = a + 1; b <= 12; ++b) {
      for (std::uint64_t c = b + 1; c <= 12; ++c) {
        for (std::uint64_t e = c + 1; e <= 12; ++e) {
          const std::vector<std::uint64_t> ex{a, b, c, e};
          const auto m = vandermonde_power_matrix(alphas, ex);
          ASSERT_FALSE(testing::cofactor_determinant(m).is_zero());
          ASSERT_EQ(bareiss_determinant(m).value, testing::cofactor_determinant(m));
          ++count;
        }
      }
    }
  }
  EXPECT_EQ(count, 715);
}

TEST(Linalg, RankAndInverse) {
  EXPECT_EQ(rank(DenseMatrix::from_integers(Q, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}})), 2u);
  testing::Rng rng(14);
  for (int it = 0; it < 200; ++it) {
    const auto a = random_integer_matrix(rng, 4, Q, 5);
    if (testing::cofactor_determinant(a).is_zero()) {
      ASSERT_THROW(inverse(a), SingularMatrix);
      continue;
    }
    ASSERT_EQ(a * inverse(a), DenseMatrix::identity(4, Q));
  }
}

}  // namespace
}  // namespace primlen
