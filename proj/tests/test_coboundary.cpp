#include <gtest/gtest.h>

#include <support/oracles.hpp>
#include <wieler/coboundary.hpp>
#include <wieler/deviation.hpp>

#include <cmath>
#include <random>

using namespace wieler;

namespace {

const Analysis& fibonacci() {
    static const Analysis a = analyze(parse_rule("a -> ab\nb -> a"));
    return a;
}

const Analysis& nonpisot() {
    static const Analysis a = analyze(parse_rule("a -> abbb\nb -> a"));
    return a;
}

CylinderFunction random_u(const InvariantMeasure& mu, std::size_t level, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1, 1);
    return make_function(mu, level, [&](const Word&) { return d(rng); });
}

}  // namespace

TEST(Obstruction, ZeroFunction) {
    const auto& an = fibonacci();
    const auto ob = obstruction_vector(an, constant_function(an.measure, 0.0, 3), 3.0, 12);
    EXPECT_EQ(ob.norm, 0.0);
    EXPECT_TRUE(ob.convergent);
}

TEST(Obstruction, ConvergenceBaseMatchesAlphaTwo) {
    // smallest eventual-range eigenvalue modulus is 1/lambda for Fibonacci
    const auto& an = fibonacci();
    EXPECT_NEAR(obstruction_base(an, 2.0), 1.0, 1e-12);
    EXPECT_LT(obstruction_base(an, 2.5), 1.0);
    EXPECT_GT(obstruction_base(an, 1.5), 1.0);
    EXPECT_FALSE(obstruction_vector(an, indicator(an.measure, {0}), 1.5, 4).convergent);
}

TEST(Obstruction, Linear) {
    const auto& an = nonpisot();
    const auto h1 = random_u(an.measure, 4, 1), h2 = random_u(an.measure, 6, 2);
    const auto v1 = obstruction_vector(an, h1, 3.0, 12), v2 = obstruction_vector(an, h2, 3.0, 12);
    const auto v = obstruction_vector(an, combine(2.5, h1, -0.7, h2, an.measure), 3.0, 12);
    for (std::size_t i = 0; i < v.coords.size(); ++i) EXPECT_NEAR(v.coords[i], 2.5 * v1.coords[i] - 0.7 * v2.coords[i], 1e-10);
}

TEST(Obstruction, VanishesOnCoboundaries) {
    for (const Analysis* an : {&fibonacci(), &nonpisot()}) {
        std::mt19937 rng(17);
        for (unsigned t = 0; t < 50; ++t) {
            const auto u = random_u(an->measure, 1 + rng() % 6, t);
            const auto ob = obstruction_vector(*an, coboundary_of(u, an->measure), 3.0, 12);
            EXPECT_LE(ob.norm, 1e-8) << t;
        }
    }
}

TEST(Obstruction, IncrementsDecayGeometrically) {
    const auto& an = nonpisot();
    const auto h = random_u(an.measure, 8, 4);
    const auto ob = obstruction_vector(an, h, 3.0, 12);
    for (std::size_t k = 0; k < ob.increments.size(); ++k) {
        double n = 0;
        for (double x : ob.increments[k]) n += x * x;
        EXPECT_LE(std::sqrt(n), ob.C * std::pow(ob.base, static_cast<double>(k)) * (1 + 1e-12));
    }
}

TEST(Obstruction, NonzeroMeanIsSeen) {
    const auto& an = fibonacci();
    EXPECT_GT(obstruction_vector(an, constant_function(an.measure, 1.0), 3.0, 4).norm, 1e-3);
}

TEST(Obstruction, FibonacciMeanZeroAgainstDeviationReport) {
    const auto& an = fibonacci();
    const auto h = make_function(an.measure, 0, [&](const Word& w) { return (w[0] == 0 ? 1.0 : 0.0) - an.pd.right_vec[0]; });
    const auto ob = obstruction_vector(an, h, 3.0, 4);
    const auto table = deviation_exponent_table(an.spectrum);
    const auto rep = fit_deviation(supertile_sums(h, an.complex, an.rule, an.pd, 20), an.complex, table);
    EXPECT_TRUE(rep.bounded);
    // bounded sums: no component along the expanding direction; the only
    // possible obstruction sits on the contracting eigenvalue
    const auto scan = gottschalk_hedlund_scan(an, h, 200000);
    EXPECT_EQ(scan.verdict, "bounded");
    const auto res = solve_transfer(an, h, 3.0, 4);
    if (res.solved) {
        EXPECT_LE(res.solution->residual, 1e-6);
    } else {
        EXPECT_GT(res.obstruction.norm, 1e-6);
        EXPECT_FALSE(res.reason.empty());
    }
}

TEST(Obstruction, RankWitness) {
    for (const Analysis* an : {&fibonacci(), &nonpisot()}) {
        const auto r = obstruction_rank(*an, 3, 3.0);
        EXPECT_LE(r.rank, r.beta1);
        EXPECT_GE(r.rank, 1u);
    }
}

TEST(GottschalkHedlund, NonzeroMeanIsLinear) {
    const auto& an = nonpisot();
    const auto h = indicator(an.measure, {0});
    const auto g = gottschalk_hedlund_scan(an, h, 1000000);
    EXPECT_EQ(g.verdict, "linear");
    EXPECT_NEAR(g.mean, an.pd.right_vec[0], 1e-3);
}

TEST(GottschalkHedlund, CoboundaryIsBounded) {
    const auto& an = nonpisot();
    const auto u = random_u(an.measure, 3, 9);
    const auto g = gottschalk_hedlund_scan(an, coboundary_of(u, an.measure), 200000);
    EXPECT_EQ(g.verdict, "bounded");
    EXPECT_LE(g.sup, 2 * u.sup_norm() + 1e-12);
}

TEST(GottschalkHedlund, NonPisotMeanZeroGrows) {
    const auto& an = nonpisot();
    const auto h = make_function(an.measure, 0, [&](const Word& w) { return (w[0] == 0 ? 1.0 : 0.0) - an.pd.right_vec[0]; });
    const auto g = gottschalk_hedlund_scan(an, h, 2000000);
    EXPECT_EQ(g.verdict, "power");
    EXPECT_NEAR(g.power, 0.317, 0.1);
}

TEST(Transfer, RecoversIndicatorOfTwoWord) {
    const auto& an = fibonacci();
    const auto u0 = indicator(an.measure, {0, 1});
    const auto h = coboundary_of(u0, an.measure);
    const auto res = solve_transfer(an, h, 3.0, 2);
    ASSERT_TRUE(res.solved);
    const Word x = fixed_point_prefix(an.rule, 4);
    const double shift = u0(x);
    for (const auto& [w, v] : res.solution->u.values) EXPECT_NEAR(v, u0(w) - shift, 1e-12);
    EXPECT_LE(res.solution->residual, 1e-9);
    ASSERT_TRUE(res.solution->holder.has_value());
    EXPECT_DOUBLE_EQ(res.solution->holder->alpha, 1.0);
}

TEST(Transfer, ZeroGivesZero) {
    const auto& an = nonpisot();
    const auto res = solve_transfer(an, constant_function(an.measure, 0.0, 2), 3.0, 3);
    ASSERT_TRUE(res.solved);
    for (const auto& [w, v] : res.solution->u.values) EXPECT_EQ(v, 0.0);
}

TEST(Transfer, RandomCoboundariesReconstructed) {
    const auto& an = nonpisot();
    for (unsigned t = 0; t < 10; ++t) {
        const std::size_t level = 1 + t % 6;
        const auto u = random_u(an.measure, level, 100 + t);
        const auto res = solve_transfer(an, coboundary_of(u, an.measure), 3.0, level + 1);
        ASSERT_TRUE(res.solved);
        EXPECT_LE(res.solution->residual, 1e-9);
        const Word x = fixed_point_prefix(an.rule, level + 1);
        for (const auto& [w, v] : res.solution->u.values) EXPECT_NEAR(v, u(w) - u(x), 1e-9);
    }
}

TEST(Transfer, RefusesObstructedInput) {
    const auto& an = nonpisot();
    const auto res = solve_transfer(an, indicator(an.measure, {0}), 3.0, 3);
    EXPECT_FALSE(res.solved);
    EXPECT_GT(res.obstruction.norm, 1e-6);
    TransferOptions opt;
    opt.override_obstruction = true;
    opt.scan_length = 1000;
    const auto forced = solve_transfer(an, indicator(an.measure, {0}), 3.0, 3, opt);
    ASSERT_TRUE(forced.solved);
    EXPECT_GT(forced.solution->residual, 0.1);
}

TEST(Transfer, UnvisitedWordsReported) {
    const auto& an = nonpisot();
    TransferOptions opt;
    opt.scan_length = 5;
    try {
        solve_transfer(an, constant_function(an.measure, 0.0), 3.0, 6, opt);
        FAIL() << "expected a depth failure";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DepthFailure);
    }
}

TEST(Verify, PerturbationDetected) {
    const auto& an = fibonacci();
    const auto u = random_u(an.measure, 3, 5);
    const auto h = coboundary_of(u, an.measure);
    EXPECT_LE(verify_coboundary(an, h, u, 8), 1e-14);
    auto bad = u;
    bad.values.begin()->second += 0.25;
    EXPECT_GE(verify_coboundary(an, h, bad, 8), 0.125);
}
