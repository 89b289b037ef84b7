#include <gtest/gtest.h>

#include <support/oracles.hpp>
#include <wieler/dynamics.hpp>

#include <cmath>
#include <random>

using namespace wieler;

namespace {

struct World {
    SubstitutionRule rule;
    PerronData pd;
    APComplex cx;
    InvariantMeasure mu;
    Word x;                  // one-sided fixed point
    std::vector<double> pos; // tile boundaries of the fixed-point tiling
};

World world(const char* text, std::size_t tiles = 200000) {
    World w;
    w.rule = prepare(parse_rule(text)).rule;
    w.pd = perron_data(w.rule);
    w.cx = build_ap_complex(collar_rule(w.rule), w.pd);
    w.mu = invariant_measure(w.rule, 8);
    w.x = fixed_point_prefix(w.rule, tiles);
    w.pos.push_back(0);
    for (int c : w.x) w.pos.push_back(w.pos.back() + w.pd.left_vec[static_cast<std::size_t>(c)]);
    return w;
}

std::size_t tile_at(const World& w, double t) {
    return static_cast<std::size_t>(std::upper_bound(w.pos.begin(), w.pos.end(), t) - w.pos.begin()) - 1;
}

/// Solenoid coordinates of the fixed-point tiling seen from t, read off the
/// supertile structure directly: level-j supertiles sit at lambda^j times the
/// tile positions.
SolenoidPoint point_of(const World& w, double t, std::size_t depth) {
    std::map<Word, int> index;
    for (std::size_t l = 0; l < w.cx.collared.size(); ++l) index[w.cx.collared.words[l]] = static_cast<int>(l);
    SolenoidPoint p;
    for (std::size_t j = 0; j <= depth; ++j) {
        const double scale = std::pow(w.pd.lambda, static_cast<double>(j));
        const std::size_t i = tile_at(w, t / scale);
        p.coords.push_back({index.at({w.x[i - 1], w.x[i], w.x[i + 1]}), t / scale - w.pos[i]});
    }
    return p;
}

/// f(T - t) = sum_i u(t - x_i) h(word starting at tile i)
double direct(const World& w, const SuspendedFunction& f, double t) {
    const std::size_t i = tile_at(w, t);
    double v = 0;
    for (std::size_t k : {i, i + 1}) {
        const Word c(w.x.begin() + static_cast<long>(k), w.x.begin() + static_cast<long>(k + f.h.level + 1));
        v += f.profile(t - w.pos[k]) * f.h(c);
    }
    return v;
}

CylinderFunction random_h(const InvariantMeasure& mu, std::size_t level, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1, 1);
    return make_function(mu, level, [&](const Word&) { return d(rng); });
}

}  // namespace

TEST(Solenoid, SampledPointsAreCompatible) {
    const auto w = world("a -> abbb\nb -> a", 10);
    const Solenoid sol(w.cx);
    std::mt19937 rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto p = sol.sample(rng, 8);
        EXPECT_LT(sol.compatibility_defect(p), 1e-12);
        const auto q = sol.phi_inverse(sol.phi(p));
        for (std::size_t j = 0; j < q.coords.size(); ++j) {
            EXPECT_EQ(q.coords[j].first, p.coords[j].first);
            EXPECT_NEAR(q.coords[j].second, p.coords[j].second, 1e-14);
        }
        EXPECT_LT(sol.compatibility_defect(sol.phi(p)), 1e-12);
    }
}

TEST(Solenoid, FixedPointTilingCoordinates) {
    const auto w = world("a -> ab\nb -> a");
    const Solenoid sol(w.cx);
    for (double t : {150.3, 401.77, 999.1}) {
        const auto p = point_of(w, t, 6);
        EXPECT_LT(sol.compatibility_defect(p), 1e-10) << t;
    }
}

TEST(Solenoid, FlowIsAnAction) {
    const auto w = world("a -> abbb\nb -> a", 10);
    const Solenoid sol(w.cx);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dt(-2, 2);
    for (int i = 0; i < 100; ++i) {
        const auto p = sol.sample(rng, 12);
        const double s = dt(rng), t = dt(rng);
        const auto a = sol.flow(sol.flow(p, s), t), b = sol.flow(p, s + t);
        for (std::size_t j = 0; j < a.coords.size(); ++j) {
            EXPECT_EQ(a.coords[j].first, b.coords[j].first);
            EXPECT_NEAR(a.coords[j].second, b.coords[j].second, 1e-11);
        }
        // Phi conjugates the flow at time t to the flow at time lambda t
        const auto c = sol.phi(sol.flow(p, t)), d = sol.flow(sol.phi(p), w.pd.lambda * t);
        for (std::size_t j = 0; j < c.coords.size(); ++j) {
            EXPECT_EQ(c.coords[j].first, d.coords[j].first);
            EXPECT_NEAR(c.coords[j].second, d.coords[j].second, 1e-10);
        }
    }
}

TEST(Solenoid, FlowMatchesTilingTranslation) {
    const auto w = world("a -> ab\nb -> a");
    const Solenoid sol(w.cx);
    const auto p = point_of(w, 300.0, 10);
    const auto q = sol.flow(p, 7.25), r = point_of(w, 307.25, 10);
    for (std::size_t j = 0; j < q.coords.size(); ++j) {
        EXPECT_EQ(q.coords[j].first, r.coords[j].first);
        EXPECT_NEAR(q.coords[j].second, r.coords[j].second, 1e-10);
    }
    EXPECT_THROW(sol.flow(p, 1e6), Error);
}

TEST(Realize, AgreesWithDirectEvaluation) {
    for (const char* text : {"a -> ab\nb -> a", "a -> abbb\nb -> a"}) {
        const auto w = world(text);
        const auto h = random_h(w.mu, 3, 2);
        const auto f = suspend(h, 0.1, w.pd, w.mu);
        const auto F = realize(f, w.cx, w.rule, w.pd);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> where(500, 600);
        for (int i = 0; i < 300; ++i) {
            const double t = where(rng);
            EXPECT_NEAR(F(point_of(w, t, static_cast<std::size_t>(F.level))), direct(w, f, t), 1e-8) << text << " t=" << t;
        }
        // near a boundary
        const double t = w.pos[1000] + 0.01;
        EXPECT_NEAR(F(point_of(w, t, static_cast<std::size_t>(F.level))), direct(w, f, t), 1e-8);
    }
}

TEST(Correlation, ConstantsAndMeans) {
    const auto w = world("a -> abbb\nb -> a", 10);
    const auto one = constant_tlc(w.cx, 1.0);
    for (int n = 0; n <= 6; ++n) EXPECT_NEAR(correlation(one, one, n, w.cx).value, 1.0, 1e-13);
    const auto h = random_h(w.mu, 2, 7);
    const auto F = realize(suspend(h, 0.1, w.pd, w.mu), w.cx, w.rule, w.pd);
    // the mean of f is the mean of h since tiles have unit mean length
    EXPECT_NEAR(integrate(F, w.cx), mean(h, w.mu), 1e-12);
    // invariance under Phi
    for (int n = 0; n <= 5; ++n) EXPECT_NEAR(correlation(one, F, n, w.cx).value, mean(h, w.mu), 1e-12) << n;
}

namespace {

/// (1/L) integral over [0, L] of f(T - t) g(T - lambda^n t) on the fixed-point
/// tiling, which is fixed by the substitution so Phi^n scales positions.
double spatial_average(const World& w, const SuspendedFunction& f, const SuspendedFunction& g, int n, double L) {
    const double scale = std::pow(w.pd.lambda, n);
    double acc = 0;
    const double eps = f.profile.epsilon;
    for (std::size_t i = 1; w.pos[i] < L; ++i) {
        const Word c(w.x.begin() + static_cast<long>(i), w.x.begin() + static_cast<long>(i + f.h.level + 1));
        const int m = 2000;
        const double a = w.pos[i] - eps, step = 2 * eps / m;
        double s = 0;
        for (int k = 0; k <= m; ++k) {
            const double t = a + k * step;
            const double wt = (k == 0 || k == m) ? 1 : (k % 2 ? 4 : 2);
            s += wt * f.profile(t - w.pos[i]) * direct(w, g, scale * t);
        }
        acc += f.h(c) * s * step / 3;
    }
    return acc / L;
}

}  // namespace

// The spatial average carries its own discrepancy error, of order
// L^{-1} log L for Pisot rules and L^{-0.68} for the non-Pisot one.
TEST(Correlation, MatchesSpatialAverageOnFixedPoint) {
    struct Case {
        const char* text;
        double L, tol;
    };
    for (const Case& k : {Case{"a -> ab\nb -> a", 6000, 1.5e-3}, Case{"a -> abbb\nb -> a", 4000, 1e-2}}) {
        const auto w = world(k.text, 3000000);
        const auto hf = random_h(w.mu, 1, 11), hg = random_h(w.mu, 2, 12);
        const auto f = suspend(hf, 0.1, w.pd, w.mu), g = suspend(hg, 0.08, w.pd, w.mu);
        const auto F = realize(f, w.cx, w.rule, w.pd), G = realize(g, w.cx, w.rule, w.pd);
        for (int n : {0, 1, 3, 5}) {
            ASSERT_LT(std::pow(w.pd.lambda, n) * (k.L + 10), w.pos.back());
            const double expect = spatial_average(w, f, g, n, k.L);
            EXPECT_NEAR(correlation(F, G, n, w.cx).value, expect, k.tol + 0.01 * std::abs(expect)) << k.text << " n=" << n;
        }
    }
}

TEST(Correlation, QuadratureOrderIsExactPastDegree) {
    const auto w = world("a -> ab\nb -> a", 10);
    const auto h = random_h(w.mu, 2, 4);
    const auto F = realize(suspend(h, 0.1, w.pd, w.mu), w.cx, w.rule, w.pd);
    CorrelationOptions lo, hi, poor;
    lo.order = 9;
    hi.order = 40;
    poor.order = 3;
    for (int n = 0; n <= 8; ++n) {
        const auto a = correlation(F, F, n, w.cx, lo), b = correlation(F, F, n, w.cx, hi);
        EXPECT_NEAR(a.value, b.value, 1e-13 + 1e-12 * std::abs(b.value));
        EXPECT_LT(a.error_bound, 1e-10);
        const auto c = correlation(F, F, n, w.cx, poor);
        EXPECT_GT(c.error_bound, 0.0);
        EXPECT_LE(std::abs(c.value - b.value), c.error_bound + 1e-13);
    }
}

TEST(Correlation, RefusesOutOfReach) {
    const auto w = world("a -> abbb\nb -> a", 10);
    const auto h = random_h(w.mu, 1, 4);
    const auto F = realize(suspend(h, 0.1, w.pd, w.mu), w.cx, w.rule, w.pd);
    CorrelationOptions opt;
    opt.max_panels = 1e4;
    EXPECT_THROW(correlation_sequence(F, F, 40, w.cx, opt), Error);
    EXPECT_NO_THROW(correlation_sequence(F, F, 2, w.cx, opt));
}

TEST(Quadrature, GaussLegendreIntegratesPolynomials) {
    const auto [x, wts] = gauss_legendre(7);
    for (int deg = 0; deg <= 13; ++deg) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += wts[i] * std::pow(x[i], deg);
        EXPECT_NEAR(s, deg % 2 ? 0.0 : 2.0 / (deg + 1), 1e-14);
    }
}

#include <wieler/deviation.hpp>

TEST(Prony, RecoversTwoRates) {
    std::vector<double> x, err;
    for (int n = 0; n < 20; ++n) {
        x.push_back(3 * std::pow(0.5, n) + 0.2 * std::pow(-0.3, n));
        err.push_back(1e-15);
    }
    const auto fit = prony(x, 2, {0, 19});
    ASSERT_EQ(fit.rates.size(), 2u);
    EXPECT_NEAR(fit.rates[0].real(), 0.5, 1e-9);
    EXPECT_NEAR(fit.rates[1].real(), -0.3, 1e-9);
    EXPECT_NEAR(fit.amplitudes[0].real(), 3.0, 1e-7);
    EXPECT_FALSE(fit.ill_conditioned);
}

TEST(Prony, FlagsOverfitting) {
    std::vector<double> x;
    for (int n = 0; n < 20; ++n) x.push_back(std::pow(0.5, n));
    const auto fit = prony(x, 3, {0, 19});
    EXPECT_TRUE(fit.ill_conditioned);
    EXPECT_FALSE(fit.note.empty());
}

TEST(Prony, ErrorFloorBeforeWindow) {
    std::vector<double> x, err;
    for (int n = 0; n < 12; ++n) {
        x.push_back(std::pow(0.1, n));
        err.push_back(1e-4);
    }
    EXPECT_THROW(extract_resonances(x, err, 2), Error);
}

TEST(Growth, PolynomialCorrectionShowsAsDoubleRoot) {
    std::vector<double> x;
    for (int n = 0; n < 30; ++n) x.push_back(std::pow(2.0, n) + n);
    const auto comps = fit_growth_components(x, 3, 2.0);
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_NEAR(comps[0].rate.real(), 2.0, 1e-8);
    EXPECT_EQ(comps[0].multiplicity, 1u);
    EXPECT_NEAR(comps[1].rate.real(), 1.0, 1e-4);
    EXPECT_EQ(comps[1].multiplicity, 2u);
    std::vector<double> y;
    for (int n = 0; n < 40; ++n) y.push_back(n * n * std::pow(3.0, n));
    const auto g = fit_growth(y, 5, 39, 3.0, true);
    EXPECT_NEAR(g.slope, 1.0, 1e-9);
    EXPECT_NEAR(g.log_power, 2.0, 1e-8);
}

TEST(Supertiles, MatchDirectSumsOnFixedPoint) {
    for (const char* text : {"a -> ab\nb -> a", "a -> abbb\nb -> a"}) {
        const auto w = world(text, 10);
        const auto f = random_h(w.mu, 2, 8);
        const int nmax = 7;
        const auto sums = supertile_sums(f, w.cx, w.rule, w.pd, nmax);
        const auto weighted = supertile_sums(f, w.cx, w.rule, w.pd, nmax, true);
        const std::map<char, std::string> rule = std::string(text).find("abbb") != std::string::npos
                                                     ? std::map<char, std::string>{{'a', "abbb"}, {'b', "a"}}
                                                     : std::map<char, std::string>{{'a', "ab"}, {'b', "a"}};
        const std::string x = oracle::iterate_until("a", rule, 400000);
        std::map<Word, int> index;
        for (std::size_t l = 0; l < w.cx.collared.size(); ++l) index[w.cx.collared.words[l]] = static_cast<int>(l);
        for (int n = sums.n0; n <= nmax; ++n) {
            // level-n supertile i covers the image of x[0..i) to the image of x[0..i]
            std::size_t start = 0;
            std::string prefix;
            for (std::size_t i = 0; i < 40; ++i) {
                std::string img(1, x[i]);
                for (int k = 0; k < n; ++k) img = oracle::substitute(img, rule);
                if (i >= 1) {
                    double s = 0, sw = 0;
                    for (std::size_t p = start; p < start + img.size(); ++p) {
                        Word c;
                        for (std::size_t q = p; q < p + 3; ++q) c.push_back(x[q] - 'a');
                        s += f(c);
                        sw += f(c) * w.pd.left_vec[static_cast<std::size_t>(x[p] - 'a')];
                    }
                    const int e = index.at({x[i - 1] - 'a', x[i] - 'a', x[i + 1] - 'a'});
                    EXPECT_NEAR(sums.S[static_cast<std::size_t>(n)][static_cast<std::size_t>(e)], s, 1e-9 * (1 + std::abs(s))) << text << " n=" << n;
                    EXPECT_NEAR(weighted.S[static_cast<std::size_t>(n)][static_cast<std::size_t>(e)], sw, 1e-9 * (1 + std::abs(sw)));
                }
                start += img.size();
            }
        }
    }
}

TEST(Deviation, NonPisotSlopeAndDirections) {
    const auto w = world("a -> abbb\nb -> a", 10);
    const auto f = make_function(w.mu, 0, [&](const Word& u) { return (u[0] == 0 ? 1.0 : 0.0) - w.pd.right_vec[0]; });
    const auto sums = supertile_sums(f, w.cx, w.rule, w.pd, 25);
    const auto h = cohomology_direct_limit(w.cx);
    const auto table = deviation_exponent_table(classify_spectrum(h.A_ER, w.pd));
    const auto rep = fit_deviation(sums, w.cx, table);
    ASSERT_TRUE(rep.overall.has_value());
    const double predicted = std::log((std::sqrt(13.0) - 1) / 2) / std::log((1 + std::sqrt(13.0)) / 2);
    EXPECT_NEAR(rep.overall->slope, predicted, 0.05);
    EXPECT_FALSE(rep.bounded);
    bool seen = false;
    for (const auto& d : rep.directions)
        if (d.fit && d.table_row) {
            EXPECT_NEAR(d.fit->slope, d.predicted_exponent, 1e-6);
            seen = seen || std::abs(d.predicted_exponent - predicted) < 1e-9;
        }
    EXPECT_TRUE(seen);
}

TEST(Deviation, FibonacciBoundedAndZeroFunction) {
    const auto w = world("a -> ab\nb -> a", 10);
    const auto f = make_function(w.mu, 1, [&](const Word& u) { return (u[0] == 0 ? 1.0 : 0.0) - w.pd.right_vec[0]; });
    const auto h = cohomology_direct_limit(w.cx);
    const auto table = deviation_exponent_table(classify_spectrum(h.A_ER, w.pd));
    const auto rep = fit_deviation(supertile_sums(f, w.cx, w.rule, w.pd, 25), w.cx, table);
    EXPECT_TRUE(rep.bounded);
    for (int n = 1; n <= 25; ++n) EXPECT_LT(rep.sup_by_level[static_cast<std::size_t>(n)], 3.0);
    const auto zero = constant_function(w.mu, 0.0);
    const auto z = fit_deviation(supertile_sums(zero, w.cx, w.rule, w.pd, 10), w.cx, table);
    EXPECT_TRUE(z.zero);
    EXPECT_FALSE(z.note.empty());
}
