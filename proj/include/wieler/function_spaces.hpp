#pragma once
// Transversal calculus on the subshift: cylinder functions, the conditional
// expectations Pi_k and their increments, Hoelder seminorms, the S^r_alpha
// decay certificates, and suspension by a bump profile along the leaves.

#include "wieler/polynomial.hpp"
#include "wieler/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wieler {

/// A function of the coordinates 0..K of a sequence, stored on the legal
/// words of length K + 1.
struct CylinderFunction {
    std::size_t level = 0;
    std::map<Word, double> values;

    /// Evaluate on a word of length >= level + 1 (only the prefix is read).
    [[nodiscard]] double operator()(const Word& w) const {
        if (w.size() < level + 1) throw Error(ErrorKind::InvalidArgument, "word shorter than the function's level");
        if (w.size() == level + 1) {
            auto it = values.find(w);
            return it == values.end() ? 0.0 : it->second;
        }
        auto it = values.find(Word(w.begin(), w.begin() + static_cast<long>(level + 1)));
        return it == values.end() ? 0.0 : it->second;
    }

    [[nodiscard]] double sup_norm() const {
        double m = 0;
        for (const auto& [w, v] : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline void require_measure(const InvariantMeasure& mu, std::size_t len) {
    if (mu.max_word_length < len)
        throw Error(ErrorKind::InvalidArgument, "measure lacks frequencies for words of length " + std::to_string(len));
}

template <class F>
CylinderFunction make_function(const InvariantMeasure& mu, std::size_t level, F&& f) {
    require_measure(mu, level + 1);
    CylinderFunction out;
    out.level = level;
    for (const auto& w : mu.words(level + 1)) out.values[w] = f(w);
    return out;
}

inline CylinderFunction constant_function(const InvariantMeasure& mu, double c, std::size_t level = 0) {
    return make_function(mu, level, [c](const Word&) { return c; });
}

/// Indicator of the cylinder of sequences starting with w.
inline CylinderFunction indicator(const InvariantMeasure& mu, const Word& w, std::size_t level = 0) {
    level = std::max(level, w.size() - 1);
    return make_function(mu, level, [&](const Word& u) { return std::equal(w.begin(), w.end(), u.begin()) ? 1.0 : 0.0; });
}

/// The same function regarded at a higher level.
inline CylinderFunction lift(const CylinderFunction& f, std::size_t level, const InvariantMeasure& mu) {
    if (level <= f.level) return f;
    return make_function(mu, level, [&](const Word& w) { return f(w); });
}

inline double mean(const CylinderFunction& f, const InvariantMeasure& mu) {
    require_measure(mu, f.level + 1);
    double s = 0;
    for (const auto& [w, v] : f.values) s += v * mu(w);
    return s;
}

/// a * f + b * g at the common level.
inline CylinderFunction combine(double a, const CylinderFunction& f, double b, const CylinderFunction& g, const InvariantMeasure& mu) {
    const std::size_t level = std::max(f.level, g.level);
    return make_function(mu, level, [&](const Word& w) { return a * f(w) + b * g(w); });
}

/// Conditional expectation onto functions of the coordinates 0..k.
inline CylinderFunction conditional_expectation(const CylinderFunction& f, std::size_t k, const InvariantMeasure& mu) {
    if (k >= f.level) return lift(f, k, mu);
    require_measure(mu, f.level + 1);
    CylinderFunction out;
    out.level = k;
    std::map<Word, double> mass;
    for (const auto& [u, v] : f.values) {
        Word w(u.begin(), u.begin() + static_cast<long>(k + 1));
        const double m = mu(u);
        out.values[w] += v * m;
        mass[w] += m;
    }
    for (auto& [w, v] : out.values) v = mass[w] > 0 ? v / mass[w] : 0.0;
    return out;
}

struct Projection {
    CylinderFunction Pi;     // Pi_k f
    CylinderFunction Delta;  // f - Pi_k f
    CylinderFunction delta;  // Pi_k f - Pi_{k-1} f, with Pi_{-1} f = 0
};

inline Projection project(const CylinderFunction& f, std::size_t k, const InvariantMeasure& mu) {
    Projection p;
    p.Pi = conditional_expectation(f, k, mu);
    p.Delta = combine(1.0, f, -1.0, p.Pi, mu);
    if (k == 0) {
        p.delta = p.Pi;
    } else {
        const auto prev = conditional_expectation(f, k - 1, mu);
        p.delta = combine(1.0, p.Pi, -1.0, prev, mu);
    }
    return p;
}

/// delta_0 f, ..., delta_K f; their sum is f.
inline std::vector<CylinderFunction> canonical_pieces(const CylinderFunction& f, const InvariantMeasure& mu) {
    std::vector<CylinderFunction> pieces;
    for (std::size_t k = 0; k <= f.level; ++k) pieces.push_back(project(f, k, mu).delta);
    return pieces;
}

struct HolderCertificate {
    double alpha = 0;
    double seminorm = 0;
    std::vector<double> per_level_max;  // depth l: max |f(x) - f(y)| lambda^{alpha l}
};

/// Exact transversal Hoelder seminorm: for each disagreement depth l and
/// each common prefix, the worst pair comes from two different symbols at
/// position l, so only the max and min per symbol group are needed.
inline HolderCertificate holder_seminorm(const CylinderFunction& f, double alpha, double lambda) {
    HolderCertificate c;
    c.alpha = alpha;
    c.per_level_max.assign(f.level + 1, 0.0);
    for (std::size_t l = 0; l <= f.level; ++l) {
        // prefix -> symbol at l -> (max, min)
        std::map<Word, std::map<int, std::pair<double, double>>> groups;
        for (const auto& [w, v] : f.values) {
            auto& g = groups[Word(w.begin(), w.begin() + static_cast<long>(l))];
            auto [it, fresh] = g.try_emplace(w[l], v, v);
            if (!fresh) {
                it->second.first = std::max(it->second.first, v);
                it->second.second = std::min(it->second.second, v);
            }
        }
        double worst = 0;
        for (const auto& [prefix, g] : groups)
            for (const auto& [s1, mm1] : g)
                for (const auto& [s2, mm2] : g)
                    if (s1 != s2) worst = std::max(worst, mm1.first - mm2.second);
        c.per_level_max[l] = worst * std::pow(lambda, alpha * static_cast<double>(l));
        c.seminorm = std::max(c.seminorm, c.per_level_max[l]);
    }
    return c;
}

/// C' with |f|_alpha <= C' C whenever ||delta_k f|| <= C lambda^{-alpha k}.
inline double holder_bound_constant(double alpha, double lambda) { return 2.0 / (1.0 - std::pow(lambda, -alpha)); }

struct SraCertificate {
    int r = 0;
    double alpha = 0;
    double C_f = 0;
    bool finite = true;
    int offending_level = -1;
    std::vector<double> piece_norms;  // ||f^(k)||_{C^r}
    std::vector<double> scaled;       // ||f^(k)||_{C^r} lambda^{k alpha}
};

inline SraCertificate certify_from_norms(const std::vector<double>& norms, int r, double alpha, double lambda, double budget) {
    SraCertificate c;
    c.r = r;
    c.alpha = alpha;
    c.piece_norms = norms;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        const double s = norms[k] * std::pow(lambda, alpha * static_cast<double>(k));
        c.scaled.push_back(s);
        if (s > budget && c.finite) {
            c.finite = false;
            c.offending_level = static_cast<int>(k);
        }
        c.C_f = std::max(c.C_f, s);
    }
    if (!c.finite) c.C_f = std::numeric_limits<double>::infinity();
    return c;
}

/// Transversal functions are constant along leaves, so the C^r norm of a
/// piece is its sup norm.
inline SraCertificate sra_certify(const CylinderFunction& f, int r, double alpha, const InvariantMeasure& mu, double lambda, double budget = 1e6) {
    std::vector<double> norms;
    for (const auto& p : canonical_pieces(f, mu)) norms.push_back(p.sup_norm());
    return certify_from_norms(norms, r, alpha, lambda, budget);
}

/// u(t) = prefactor * q(t / epsilon) on (-epsilon, epsilon); the base
/// profile is 315 / (256 epsilon) (1 - (t/epsilon)^2)^4 and derivatives
/// keep the same form.
struct BumpProfile {
    double epsilon = 0;
    int derivative_order = 0;
    double prefactor = 0;
    RealPoly q;

    static BumpProfile standard(double epsilon) {
        BumpProfile b;
        b.epsilon = epsilon;
        b.prefactor = 315.0 / (256.0 * epsilon);
        // (1 - s^2)^4
        b.q = {1, 0, -4, 0, 6, 0, -4, 0, 1};
        return b;
    }

    [[nodiscard]] double operator()(double t) const {
        const double s = t / epsilon;
        if (s <= -1.0 || s >= 1.0) return 0.0;
        return prefactor * evaluate(q, s);
    }

    [[nodiscard]] BumpProfile derivative() const {
        BumpProfile d = *this;
        d.derivative_order += 1;
        d.prefactor = prefactor / epsilon;
        d.q = wieler::derivative(q);
        return d;
    }

    [[nodiscard]] double integral() const {
        double s = 0;
        for (std::size_t i = 0; i < q.size(); i += 2) s += 2.0 * q[i] / static_cast<double>(i + 1);
        return prefactor * epsilon * s;
    }

    /// sup |u^(i)|
    [[nodiscard]] double sup_derivative(int i) const {
        RealPoly p = q;
        double pre = prefactor;
        for (int k = 0; k < i; ++k) {
            p = wieler::derivative(p);
            pre /= epsilon;
        }
        return std::abs(pre) * sup_abs(p, -1.0, 1.0);
    }

    /// derivatives of order <= smoothness vanish at the support boundary
    [[nodiscard]] int smoothness() const { return 3 - derivative_order; }
};

/// h_eps(t, c) = u(t) h(c), with canonical pieces g_k = u (x) delta_k h.
struct SuspendedFunction {
    BumpProfile profile;
    CylinderFunction h;
    std::vector<CylinderFunction> pieces;
    std::vector<double> piece_sup;
    double lambda = 0;

    /// ||g_k||_{C^r(Gamma_k)}: derivatives are taken in level-k
    /// coordinates, which are lambda^{-k} times the level-0 coordinate.
    [[nodiscard]] double piece_norm(std::size_t k, int r) const {
        double s = 0;
        for (int i = 0; i <= r; ++i) s += std::pow(lambda, static_cast<double>(i) * static_cast<double>(k)) * profile.sup_derivative(i);
        return piece_sup[k] * s;
    }
};

inline SuspendedFunction suspend(const CylinderFunction& h, double epsilon, const PerronData& pd, const InvariantMeasure& mu,
                                 std::optional<BumpProfile> profile = std::nullopt) {
    const double vmin = *std::min_element(pd.left_vec.begin(), pd.left_vec.end());
    if (!(epsilon > 0) || !(epsilon < vmin / 4))
        throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, min edge length / 4 = " + std::to_string(vmin / 4) + ")");
    SuspendedFunction s;
    s.profile = profile ? *profile : BumpProfile::standard(epsilon);
    s.h = h;
    s.lambda = pd.lambda;
    s.pieces = canonical_pieces(h, mu);
    for (const auto& p : s.pieces) s.piece_sup.push_back(p.sup_norm());
    return s;
}

inline SuspendedFunction leafwise_derivative(const SuspendedFunction& f) {
    SuspendedFunction d = f;
    d.profile = f.profile.derivative();
    return d;
}

inline SraCertificate sra_certify(const SuspendedFunction& f, int r, double alpha, double budget = 1e6) {
    if (r > f.profile.smoothness())
        throw Error(ErrorKind::InvalidArgument, "profile is only C^" + std::to_string(f.profile.smoothness()));
    std::vector<double> norms;
    for (std::size_t k = 0; k < f.pieces.size(); ++k) norms.push_back(f.piece_norm(k, r));
    return certify_from_norms(norms, r, alpha, f.lambda, budget);
}

/// Lexicographically first legal word of length j with at least two legal
/// one-letter right extensions.
inline std::optional<Word> right_special_word(const InvariantMeasure& mu, std::size_t j) {
    require_measure(mu, j + 1);
    std::map<Word, int> ext;
    for (const auto& w : mu.words(j + 1)) ext[Word(w.begin(), w.end() - 1)] += 1;
    for (const auto& [w, n] : ext)
        if (n >= 2) return w;
    return std::nullopt;
}

/// f = sum_{j <= J} lambda^{-alpha j} phi_j, where phi_j has sup norm 1,
/// lives on the extensions of a right-special word of length j and has
/// zero conditional mean given the first j coordinates.
inline CylinderFunction right_special_series(const InvariantMeasure& mu, double lambda, double alpha, std::size_t J) {
    CylinderFunction f = constant_function(mu, 0.0, J);
    for (std::size_t j = 0; j <= J; ++j) {
        const auto w = right_special_word(mu, j);
        if (!w) continue;
        std::vector<Word> exts;
        for (const auto& u : mu.words(j + 1))
            if (std::equal(w->begin(), w->end(), u.begin())) exts.push_back(u);
        const double m0 = mu(exts[0]), m1 = mu(exts[1]);
        const double scale = 1.0 / std::max(m0, m1);
        // phi(w s0) = m1 / max, phi(w s1) = -m0 / max, zero on other extensions
        const double c = std::pow(lambda, -alpha * static_cast<double>(j));
        for (auto& [u, v] : f.values) {
            if (std::equal(exts[0].begin(), exts[0].end(), u.begin())) v += c * m1 * scale;
            else if (std::equal(exts[1].begin(), exts[1].end(), u.begin())) v -= c * m0 * scale;
        }
    }
    return f;
}

}  // namespace wieler
