// Correlation decay for a -> abbb, b -> a, compared with the predicted rate.

#include <wieler/wieler.hpp>

#include <cstdio>
#include <random>

using namespace wieler;

int main() {
    const auto an = analyze(parse_rule("a -> abbb\nb -> a"));
    const auto pred = ruelle_prediction(an.spectrum, 1, 3.0, 2);
    for (const auto& mu : pred.base_set) std::printf("predicted resonance %+.6f (|.| = %.6f)\n", mu.real(), std::abs(mu));

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> d(-1, 1);
    auto h = make_function(an.measure, 2, [&](const Word&) { return d(rng); });
    const double m = mean(h, an.measure);
    for (auto& [w, v] : h.values) v -= m;

    const auto F = realize(suspend(h, 0.08, an.pd, an.measure), an.complex, an.rule, an.pd);
    CorrelationOptions opt;
    opt.order = 32;
    const auto seq = correlation_sequence(F, F, 12, an.complex, opt);
    std::vector<double> x, err;
    for (const auto& c : seq) {
        std::printf("  n=%2d  C=%+.10e  (+- %.1e)\n", c.n, c.value, c.error_bound);
        x.push_back(c.value);
        err.push_back(c.error_bound);
    }
    try {
        const auto fit = extract_resonances(x, err, 2);
        std::printf("fit on [%d, %d]:", fit.n_lo, fit.n_hi);
        for (const auto& r : fit.rates) std::printf(" %+.4f", r.real());
        std::printf("\n");
    } catch (const Error& e) {
        std::printf("no fit: %s\n", e.what());
    }
}
