#include <gtest/gtest.h>

#include <support/oracles.hpp>
#include <wieler/exact.hpp>
#include <wieler/polynomial.hpp>

#include <random>

using namespace wieler;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

}  // namespace

TEST(Smith, ReconstructsInputWithUnimodularFactors) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        const IntMatrix d = random_matrix(rng, r, c, -4, 4);
        const auto snf = smith_normal_form(d);
        EXPECT_TRUE(is_unimodular(snf.P));
        EXPECT_TRUE(is_unimodular(snf.Q));
        EXPECT_EQ(snf.P * snf.P_inv, IntMatrix::identity(r));
        EXPECT_EQ(snf.Q * snf.Q_inv, IntMatrix::identity(c));
        EXPECT_EQ(snf.P * d * snf.Q, snf.S(r, c));
        EXPECT_EQ(snf.P_inv * snf.S(r, c) * snf.Q_inv, d);
        for (std::size_t i = 0; i + 1 < snf.diagonal.size(); ++i) EXPECT_EQ(snf.diagonal[i + 1] % snf.diagonal[i], 0);
        EXPECT_EQ(snf.rank, rank(d));
    }
}

TEST(Smith, KnownInvariantFactors) {
    const IntMatrix d{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
    const auto snf = smith_normal_form(d);
    ASSERT_EQ(snf.diagonal.size(), 3u);
    EXPECT_EQ(snf.diagonal[0], 2);
    EXPECT_EQ(snf.diagonal[1], 6);
    EXPECT_EQ(snf.diagonal[2], 12);
}

TEST(Smith, CircleCoboundaryHasNoTorsion) {
    // one vertex, one loop edge
    const IntMatrix d{{0}};
    const auto snf = smith_normal_form(d);
    EXPECT_EQ(snf.rank, 0u);
}

TEST(CharPoly, AgreesWithDeterminantAtIntegerPoints) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        const RatMatrix a = random_matrix(rng, n, n, -3, 3).cast<Rational>();
        const auto p = characteristic_polynomial(a);
        ASSERT_EQ(p.size(), n + 1);
        EXPECT_EQ(p.back(), 1);
        for (long x = -3; x <= 3; ++x) EXPECT_EQ(evaluate(p, Rational(x)), oracle::char_poly_at(a, x));
    }
}

TEST(CharPoly, Fibonacci) {
    const IntMatrix m{{1, 1}, {1, 0}};
    const auto p = characteristic_polynomial(m);
    EXPECT_EQ(p, (std::vector<Integer>{-1, -1, 1}));
}

TEST(Linear, RankAndColumnSpace) {
    const RatMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    EXPECT_EQ(rank(a), 2u);
    const auto b = column_space_basis(a);
    EXPECT_EQ(b.cols(), 2u);
    const auto x = solve_full_column_rank(b, a);
    EXPECT_EQ(b * x, a);
}

TEST(Linear, InverseRoundTrip) {
    const RatMatrix a{{2, 1}, {7, 4}};
    EXPECT_EQ(a * inverse(a), RatMatrix::identity(2));
    EXPECT_THROW(inverse(RatMatrix{{1, 2}, {2, 4}}), std::domain_error);
}

TEST(Polynomial, SquarefreeDecomposition) {
    // (x - 1)^2 (x^2 - x - 1)
    const RatPoly f = poly_mul(poly_pow(RatPoly{-1, 1}, 2), RatPoly{-1, -1, 1});
    const auto parts = squarefree_decomposition(f);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0], (RatPoly{-1, -1, 1}));
    EXPECT_EQ(parts[1], (RatPoly{-1, 1}));
}

TEST(Polynomial, FactorsOverIntegers) {
    // (x^2 - x - 1)(x^2 + 1)(x - 2)
    const RatPoly f = poly_mul(poly_mul(RatPoly{-1, -1, 1}, RatPoly{1, 0, 1}), RatPoly{-2, 1});
    auto fs = factor_squarefree(f);
    ASSERT_EQ(fs.size(), 3u);
    RatPoly prod{1};
    for (const auto& g : fs) prod = poly_mul(prod, g);
    EXPECT_EQ(prod, f);
    // irreducible quartic stays whole
    const RatPoly q{-3, 0, 0, 1, 1};
    EXPECT_EQ(factor_squarefree(q).size(), 1u);
}

TEST(Polynomial, NumericRootsOfQuadratic) {
    const auto roots = numeric_roots({-3, -1, 1});
    ASSERT_EQ(roots.size(), 2u);
    const double big = std::max(roots[0].real(), roots[1].real());
    EXPECT_NEAR(big, oracle::quadratic_root(1, 3), 1e-14);
}

TEST(Polynomial, SupAbsOnInterval) {
    const RealPoly p{0, 0, -1};  // -x^2
    EXPECT_NEAR(sup_abs(p, -2, 1), 4.0, 1e-14);
    const RealPoly q{0, 1, 0, -1};  // x - x^3, max at 1/sqrt(3)
    EXPECT_NEAR(sup_abs(q, 0, 1), 2.0 / (3.0 * std::sqrt(3.0)), 1e-12);
}
