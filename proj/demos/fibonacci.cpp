// Cohomology, spectrum and deviations for the Fibonacci substitution.

#include <wieler/wieler.hpp>

#include <cstdio>

using namespace wieler;

int main() {
    const auto an = analyze(parse_rule("a -> ab\nb -> a"));
    std::printf("lambda = %.12f\n", an.lambda());
    std::printf("H1 rank %zu, eventual range dim %zu\n", an.cohomology.h1_rank, an.cohomology.er_dim());
    for (const auto& e : an.spectrum.eigenvalues) std::printf("  eigenvalue %+.6f%+.6fi\n", e.value.real(), e.value.imag());

    const auto pred = ruelle_prediction(an.spectrum, 1, 3.0, 2);
    std::printf("Pisot: %s, predicted resonances: %zu\n", pred.pisot ? "yes" : "no", pred.base_set.size());

    // frequency of a minus its mean has bounded supertile sums
    const auto h = make_function(an.measure, 0, [&](const Word& w) { return (w[0] == 0 ? 1.0 : 0.0) - an.pd.right_vec[0]; });
    const auto sums = supertile_sums(h, an.complex, an.rule, an.pd, 20);
    for (int n = sums.n0; n <= 20; n += 4) std::printf("  level %2d  sup |S| = %.6f\n", n, sums.sup(n));

    const auto scan = gottschalk_hedlund_scan(an, h, 100000);
    std::printf("Birkhoff sums: %s (sup %.4f over %zu steps)\n", scan.verdict.c_str(), scan.sup, scan.N);
}
