#pragma once
// Spectrum of the induced map on cohomology: Jordan data, the expanding and
// contracting sets, resonance predictions and deviation exponents.

#include "wieler/exact.hpp"
#include "wieler/polynomial.hpp"
#include "wieler/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace wieler {

struct Eigenvalue {
    Complex value;
    RatPoly factor;                 // monic irreducible factor over Z with this root
    std::size_t multiplicity = 1;   // algebraic
    std::vector<std::size_t> blocks;  // Jordan block sizes, descending

    [[nodiscard]] double modulus() const { return std::abs(value); }
    [[nodiscard]] std::size_t largest_block() const { return blocks.empty() ? 0 : blocks.front(); }
};

/// Exact Jordan structure of a rational matrix. Eigenvalues are grouped by
/// irreducible factor of the characteristic polynomial; each root of a
/// factor carries the same block sizes.
inline std::vector<Eigenvalue> jordan_structure(const RatMatrix& a) {
    if (!a.square()) throw Error(ErrorKind::InvalidArgument, "Jordan structure of a non-square matrix");
    std::vector<Eigenvalue> out;
    if (a.rows() == 0) return out;
    const RatPoly chi = characteristic_polynomial(a);
    const auto sqf = squarefree_decomposition(chi);
    const std::size_t n = a.rows();
    for (std::size_t mult = 1; mult <= sqf.size(); ++mult) {
        if (degree(sqf[mult - 1]) <= 0) continue;
        for (const auto& f : factor_squarefree(sqf[mult - 1])) {
            const auto d = static_cast<std::size_t>(degree(f));
            // nullity of f(A)^j, j = 0..mult
            const RatMatrix fa = evaluate(f, a);
            std::vector<std::size_t> nullity{0};
            RatMatrix pw = RatMatrix::identity(n);
            for (std::size_t j = 1; j <= mult; ++j) {
                pw = pw * fa;
                nullity.push_back(n - rank(pw));
            }
            // blocks of size >= j, per root
            std::vector<std::size_t> at_least(mult + 2, 0);
            for (std::size_t j = 1; j <= mult; ++j) at_least[j] = (nullity[j] - nullity[j - 1]) / d;
            std::vector<std::size_t> blocks;
            for (std::size_t j = mult; j >= 1; --j) {
                const std::size_t exactly = at_least[j] - at_least[j + 1];
                for (std::size_t c = 0; c < exactly; ++c) blocks.push_back(j);
            }
            for (const auto& root : numeric_roots(f)) {
                Eigenvalue ev;
                ev.value = root;
                ev.factor = f;
                ev.multiplicity = mult;
                ev.blocks = blocks;
                out.push_back(ev);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
        if (std::abs(x.modulus() - y.modulus()) > 1e-12) return x.modulus() > y.modulus();
        return std::arg(x.value) > std::arg(y.value);
    });
    return out;
}

inline std::vector<Eigenvalue> jordan_structure(const IntMatrix& a) { return jordan_structure(a.cast<Rational>()); }

enum class Comparison { Below, Equal, Above };

/// |root| compared with 1: exact when decidable from the factor (linear,
/// or complex quadratic via its constant term), else within 1e-12.
inline Comparison compare_modulus_with_one(const Eigenvalue& ev) {
    const int d = degree(ev.factor);
    if (d == 1) {
        const Rational r = -ev.factor[0];
        const Rational a = r < 0 ? Rational(-r) : r;
        return a < 1 ? Comparison::Below : (a == 1 ? Comparison::Equal : Comparison::Above);
    }
    if (d == 2) {
        const Rational c = ev.factor[0], b = ev.factor[1];
        if (b * b - 4 * c < 0) return c < 1 ? Comparison::Below : (c == 1 ? Comparison::Equal : Comparison::Above);
        // real irrational roots are never +-1
        return ev.modulus() < 1 ? Comparison::Below : Comparison::Above;
    }
    if (evaluate(ev.factor, Rational(1)) == 0 || evaluate(ev.factor, Rational(-1)) == 0) return Comparison::Equal;
    const double m = ev.modulus();
    if (std::abs(m - 1.0) <= 1e-12) return Comparison::Equal;
    return m < 1 ? Comparison::Below : Comparison::Above;
}

inline Comparison compare_modulus(const Eigenvalue& ev, double threshold) {
    if (threshold == 1.0) return compare_modulus_with_one(ev);
    const double m = ev.modulus();
    if (std::abs(m - threshold) <= 1e-12 * std::max(1.0, threshold)) return Comparison::Equal;
    return m < threshold ? Comparison::Below : Comparison::Above;
}

struct SpectralClassification {
    int d = 1;
    double lambda = 0, lambda0 = 0, h_top = 0, chi_minus = 0;
    std::vector<Eigenvalue> eigenvalues;   // of Phi* on the eventual range
    std::vector<Complex> Sigma_plus;       // expanding eigenvalues of Phi*
    std::vector<Complex> Sigma_minus;      // their reciprocals
    std::vector<Complex> sigma_minus;      // eigenvalues mu of Phi^{-1*} with log|mu| < chi_- - h_top
    std::vector<std::size_t> E_plus;       // indices into eigenvalues, |nu| >= lambda / lambda0
    std::vector<std::size_t> E_plus_strict;
    std::vector<std::size_t> E_plus_equal;

    [[nodiscard]] double alpha_threshold() const { return h_top / chi_minus; }
};

/// User-supplied data for d >= 2: expansion eigenvalues of the affine map
/// and the matrix of Phi* on H^d.
struct SpectralInput {
    int d = 1;
    std::vector<double> expansion;
    RatMatrix cohomology_matrix;
};

inline SpectralClassification classify_spectrum(const std::vector<Eigenvalue>& eigs, int d, double lambda, double lambda0) {
    if (!(lambda > 1) || !(lambda0 > 1)) throw Error(ErrorKind::InvalidArgument, "expansion must exceed 1");
    SpectralClassification c;
    c.d = d;
    c.lambda = lambda;
    c.lambda0 = lambda0;
    c.h_top = std::log(lambda);
    c.chi_minus = std::log(lambda0);
    c.eigenvalues = eigs;
    const double threshold = lambda / lambda0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        const auto& ev = eigs[i];
        const Comparison one = compare_modulus_with_one(ev);
        if (one == Comparison::Above) {
            c.Sigma_plus.push_back(ev.value);
            c.Sigma_minus.push_back(1.0 / ev.value);
        }
        if (ev.modulus() > 0) {
            const Complex mu = 1.0 / ev.value;
            const double lhs = std::log(std::abs(mu));
            const double rhs = c.chi_minus - c.h_top;
            bool in_sigma;
            if (d == 1) in_sigma = one == Comparison::Above;  // rhs = 0 exactly
            else in_sigma = lhs < rhs - 1e-12;
            if (in_sigma) c.sigma_minus.push_back(mu);
        }
        const Comparison t = compare_modulus(ev, threshold);
        if (t != Comparison::Below) {
            c.E_plus.push_back(i);
            (t == Comparison::Equal ? c.E_plus_equal : c.E_plus_strict).push_back(i);
        }
    }
    if (d == 1) {
        // cross-check the shortcut sigma^- = Sigma^- against the inequality
        for (const auto& mu : c.sigma_minus)
            if (!(std::log(std::abs(mu)) < 1e-9)) throw std::logic_error("sigma^- shortcut disagrees with the inequality");
    }
    return c;
}

inline SpectralClassification classify_spectrum(const RatMatrix& a_er, const PerronData& pd) {
    return classify_spectrum(jordan_structure(a_er), 1, pd.lambda, pd.lambda0);
}

inline SpectralClassification classify_spectrum(const SpectralInput& in) {
    if (in.d < 1 || static_cast<std::size_t>(in.d) != in.expansion.size())
        throw Error(ErrorKind::InvalidArgument, "need one expansion eigenvalue per dimension");
    double lambda = 1, lambda0 = 1e300;
    for (double x : in.expansion) {
        lambda *= std::abs(x);
        lambda0 = std::min(lambda0, std::abs(x));
    }
    auto cls = classify_spectrum(jordan_structure(in.cohomology_matrix), in.d, lambda, lambda0);
    // consistency: lambda appears among the eigenvalues
    bool found = false;
    for (const auto& ev : cls.eigenvalues) found = found || std::abs(ev.value - Complex(lambda)) < 1e-8 * lambda;
    if (!found) throw Error(ErrorKind::InvalidArgument, "product of expansion eigenvalues is not an eigenvalue of the cohomology matrix");
    return cls;
}

struct PredictedResonance {
    Complex value;
    int k = 0;        // ladder step; 0 for the base set
    int r = 0;        // regularity (r + k, alpha - k)
    double alpha = 0;
};

struct RuellePrediction {
    std::vector<Complex> base_set;
    std::vector<PredictedResonance> ladder;  // includes the base set with k = 0
    double alpha_threshold = 1;
    bool pisot = false;
};

inline RuellePrediction ruelle_prediction(const SpectralClassification& cls, int r, double alpha, int k_max) {
    RuellePrediction p;
    p.alpha_threshold = cls.alpha_threshold();
    if (!(alpha > p.alpha_threshold))
        throw Error(ErrorKind::InvalidArgument, "alpha must exceed h_top / chi_- = " + std::to_string(p.alpha_threshold));
    if (cls.d > 2) throw Error(ErrorKind::InvalidArgument, "predictions are available for d = 1 and d = 2");
    const double pf = std::exp(-cls.h_top);
    bool removed = false;
    for (const auto& mu : cls.sigma_minus) {
        if (!removed && std::abs(mu - Complex(pf)) < 1e-10) {
            removed = true;
            continue;
        }
        p.base_set.push_back(mu);
    }
    std::sort(p.base_set.begin(), p.base_set.end(), [](const Complex& x, const Complex& y) {
        if (std::abs(std::abs(x) - std::abs(y)) > 1e-12) return std::abs(x) > std::abs(y);
        return std::arg(x) > std::arg(y);
    });
    p.pisot = p.base_set.empty();
    for (const auto& mu : p.base_set) {
        p.ladder.push_back({mu, 0, r, alpha});
        if (cls.d != 1) continue;
        for (int k = 1; k <= k_max && k < alpha - p.alpha_threshold; ++k)
            p.ladder.push_back({mu * std::pow(pf, k), k, r + k, alpha - k});
    }
    return p;
}

struct DeviationRow {
    std::size_t eigen_index = 0;
    Complex value;
    std::size_t j = 1;        // position within the Jordan block
    double exponent = 0;      // d log|nu| / log lambda
    std::size_t log_power = 0;
    bool equality = false;
};

struct DeviationExponentTable {
    std::vector<DeviationRow> rows;
    double boundary_exponent = 0;
};

inline DeviationExponentTable deviation_exponent_table(const SpectralClassification& cls) {
    DeviationExponentTable t;
    t.boundary_exponent = cls.d * (1.0 - std::log(cls.lambda0) / std::log(cls.lambda));
    if (std::abs(t.boundary_exponent) < 1e-15) t.boundary_exponent = 0.0;
    auto add = [&](std::size_t i, bool eq) {
        const auto& ev = cls.eigenvalues[i];
        const std::size_t kappa = std::max<std::size_t>(1, ev.largest_block());
        for (std::size_t j = 1; j <= kappa; ++j) {
            DeviationRow row;
            row.eigen_index = i;
            row.value = ev.value;
            row.j = j;
            row.exponent = cls.d * std::log(ev.modulus()) / std::log(cls.lambda);
            row.log_power = eq ? j : j - 1;
            row.equality = eq;
            t.rows.push_back(row);
        }
    };
    for (std::size_t i : cls.E_plus_strict) add(i, false);
    for (std::size_t i : cls.E_plus_equal) add(i, true);
    std::sort(t.rows.begin(), t.rows.end(), [](const DeviationRow& a, const DeviationRow& b) {
        if (std::abs(a.exponent - b.exponent) > 1e-12) return a.exponent > b.exponent;
        if (a.log_power != b.log_power) return a.log_power > b.log_power;
        if (std::abs(std::abs(a.value) - std::abs(b.value)) > 1e-12) return std::abs(a.value) > std::abs(b.value);
        if (std::abs(std::arg(a.value) - std::arg(b.value)) > 1e-12) return std::arg(a.value) > std::arg(b.value);
        return a.j < b.j;
    });
    return t;
}

}  // namespace wieler
