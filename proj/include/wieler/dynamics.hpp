#pragma once
// Solenoid coordinates on the tiling space, the translation flow and the
// substitution map in those coordinates, realizations of suspended
// functions on the approximant, and correlation integrals by quadrature.

#include "wieler/ap_complex.hpp"
#include "wieler/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wieler {

/// (z_0, ..., z_K) with z_j = (edge, offset) on the approximant and
/// gamma(z_{j+1}) = z_j. Offsets at depth j are in units where the edge has
/// its level-0 length; the real distance is lambda^j times the offset.
struct SolenoidPoint {
    std::vector<std::pair<int, double>> coords;
    [[nodiscard]] std::size_t depth() const { return coords.empty() ? 0 : coords.size() - 1; }
};

class Solenoid {
public:
    explicit Solenoid(const APComplex& cx) : cx_(&cx) {
        offsets_.resize(cx.num_edges());
        for (std::size_t e = 0; e < cx.num_edges(); ++e) {
            double acc = 0;
            for (int f : cx.edges[e].path) {
                offsets_[e].push_back(acc);
                acc += edge_length(f);
            }
            offsets_[e].push_back(acc);
        }
    }

    [[nodiscard]] const APComplex& complex() const { return *cx_; }
    [[nodiscard]] double edge_length(int e) const { return cx_->edges[static_cast<std::size_t>(e)].length; }
    /// start of the i-th path edge inside gamma(e), in level-0 units of the image
    [[nodiscard]] const std::vector<double>& path_offsets(int e) const { return offsets_[static_cast<std::size_t>(e)]; }

    /// gamma(e, s): the image point stretched by lambda.
    [[nodiscard]] std::pair<int, double> gamma(const std::pair<int, double>& z) const {
        const auto& off = offsets_[static_cast<std::size_t>(z.first)];
        const auto& path = cx_->edges[static_cast<std::size_t>(z.first)].path;
        const double S = cx_->lambda * z.second;
        auto it = std::upper_bound(off.begin(), off.end() - 1, S);
        std::size_t i = it == off.begin() ? 0 : static_cast<std::size_t>(it - off.begin()) - 1;
        i = std::min(i, path.size() - 1);
        const int f = path[i];
        return {f, std::clamp(S - off[i], 0.0, edge_length(f))};
    }

    /// Sample from the invariant measure: z_K with density rho_e on each edge, then
    /// the lower coordinates by gamma.
    template <class Rng>
    [[nodiscard]] SolenoidPoint sample(Rng& rng, std::size_t depth) const {
        std::vector<double> w;
        for (std::size_t e = 0; e < cx_->num_edges(); ++e) w.push_back(cx_->density[e] * cx_->edges[e].length);
        std::discrete_distribution<int> pick(w.begin(), w.end());
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        SolenoidPoint p;
        p.coords.resize(depth + 1);
        const int e = pick(rng);
        p.coords[depth] = {e, unit(rng) * edge_length(e)};
        for (std::size_t j = depth; j-- > 0;) p.coords[j] = gamma(p.coords[j + 1]);
        return p;
    }

    /// max over j of the distance between gamma(z_{j+1}) and z_j (0 when the edges agree exactly)
    [[nodiscard]] double compatibility_defect(const SolenoidPoint& p) const {
        double worst = 0;
        for (std::size_t j = 0; j + 1 < p.coords.size(); ++j) {
            const auto g = gamma(p.coords[j + 1]);
            if (g.first != p.coords[j].first) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::abs(g.second - p.coords[j].second));
        }
        return worst;
    }

    /// The substitution homeomorphism: (z_0, z_1, ...) -> (gamma z_0, z_0, z_1, ...),
    /// truncated to the same depth.
    [[nodiscard]] SolenoidPoint phi(const SolenoidPoint& p) const {
        SolenoidPoint q;
        q.coords.push_back(gamma(p.coords.front()));
        q.coords.insert(q.coords.end(), p.coords.begin(), p.coords.end() - 1);
        return q;
    }

    /// Inverse: drop z_0. Loses one level of depth.
    [[nodiscard]] SolenoidPoint phi_inverse(const SolenoidPoint& p) const {
        if (p.coords.size() < 2) throw Error(ErrorKind::DepthFailure, "point has no coordinate beyond depth 0");
        SolenoidPoint q;
        q.coords.assign(p.coords.begin() + 1, p.coords.end());
        return q;
    }

    /// Translation by t (positive t moves the origin to the right).
    [[nodiscard]] SolenoidPoint flow(const SolenoidPoint& p, double t) const {
        const std::size_t K = p.depth();
        std::size_t j = 0;
        for (; j <= K; ++j) {
            const double s = p.coords[j].second + std::pow(cx_->lambda, -static_cast<double>(j)) * t;
            if (s >= 0 && s < edge_length(p.coords[j].first)) break;
        }
        if (j > K) throw Error(ErrorKind::DepthFailure, "translation leaves the deepest stored supertile; increase the depth");
        SolenoidPoint q = p;
        for (std::size_t i = j; i <= K; ++i) q.coords[i].second += std::pow(cx_->lambda, -static_cast<double>(i)) * t;
        for (std::size_t i = j; i-- > 0;) q.coords[i] = gamma(q.coords[i + 1]);
        return q;
    }

private:
    const APComplex* cx_;
    std::vector<std::vector<double>> offsets_;
};

/// amp * q(scale * (s - center)) on [lo, hi] of one edge.
struct LeafPiece {
    double lo = 0, hi = 0, center = 0, scale = 1, amp = 0;
    RealPoly q;
    [[nodiscard]] double operator()(double s) const { return (s < lo || s > hi) ? 0.0 : amp * evaluate(q, scale * (s - center)); }
};

/// A function on the approximant, piecewise polynomial on each edge; f(z) = F(z_level).
struct TlcFunction {
    int level = 0;
    std::vector<std::vector<LeafPiece>> pieces;  // per edge

    [[nodiscard]] double operator()(int e, double s) const {
        double v = 0;
        for (const auto& p : pieces[static_cast<std::size_t>(e)]) v += p(s);
        return v;
    }
    [[nodiscard]] double operator()(const SolenoidPoint& z) const {
        const auto& c = z.coords.at(static_cast<std::size_t>(level));
        return (*this)(c.first, c.second);
    }
    [[nodiscard]] std::size_t num_pieces() const {
        std::size_t n = 0;
        for (const auto& p : pieces) n += p.size();
        return n;
    }
};

inline TlcFunction constant_tlc(const APComplex& cx, double c) {
    TlcFunction f;
    f.pieces.resize(cx.num_edges());
    for (std::size_t e = 0; e < cx.num_edges(); ++e) f.pieces[e].push_back({0.0, cx.edges[e].length, 0.0, 1.0, c, {1.0}});
    return f;
}

/// smallest J with min_l |rho^J(l)| >= m
inline unsigned level_for_length(const SubstitutionRule& rule, std::size_t m) {
    unsigned J = 0;
    std::vector<std::size_t> len(rule.size(), 1);
    auto shortest = [&] { return *std::min_element(len.begin(), len.end()); };
    while (shortest() < m) {
        std::vector<std::size_t> next(rule.size(), 0);
        for (std::size_t l = 0; l < rule.size(); ++l)
            for (int c : rule.images[l]) next[l] += len[static_cast<std::size_t>(c)];
        len = next;
        ++J;
        if (J > 200) throw Error(ErrorKind::DepthFailure, "supertiles do not grow");
    }
    return J;
}

/// Realization at the level where the supertile of each edge, followed by
/// the supertile of its right neighbour, determines every context word.
inline TlcFunction realize(const SuspendedFunction& f, const APComplex& cx, const SubstitutionRule& rule, const PerronData& pd) {
    const std::size_t K = f.h.level;
    const unsigned J = level_for_length(rule, K + 1);
    const double lamJ = std::pow(cx.lambda, static_cast<double>(J));
    const double width = f.profile.epsilon / lamJ;
    const int d = cx.collared.depth;
    TlcFunction F;
    F.level = static_cast<int>(J);
    F.pieces.resize(cx.num_edges());
    for (std::size_t e = 0; e < cx.num_edges(); ++e) {
        const Word& w = cx.collared.words[e];
        const Word y = rule.iterate({w[static_cast<std::size_t>(d)]}, J);
        Word ctx = y;
        const Word z = rule.iterate({w[static_cast<std::size_t>(d + 1)]}, J);
        ctx.insert(ctx.end(), z.begin(), z.end());
        const double len = cx.edges[e].length;
        double pos = 0;
        for (std::size_t i = 0; i <= y.size(); ++i) {
            const double s_i = (i == y.size()) ? len : pos / lamJ;
            const double v = f.h(Word(ctx.begin() + static_cast<long>(i), ctx.begin() + static_cast<long>(i + K + 1)));
            if (v != 0.0) {
                LeafPiece p{std::max(0.0, s_i - width), std::min(len, s_i + width), s_i, lamJ / f.profile.epsilon, v * f.profile.prefactor, f.profile.q};
                F.pieces[e].push_back(p);
            }
            if (i < y.size()) pos += pd.left_vec[static_cast<std::size_t>(y[i])];
        }
    }
    return F;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "quadrature order must be positive");
    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] = 2 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

struct CorrelationValue {
    int n = 0;
    double value = 0;
    double error_bound = 0;  // quadrature remainder plus rounding
    std::size_t panels = 0;
};

struct CorrelationOptions {
    int order = 24;
    double max_panels = 2e8;
};

namespace detail {

/// factorials ratio k! / (k - m)! as double
inline double falling(std::size_t k, std::size_t m) {
    double r = 1;
    for (std::size_t i = 0; i < m; ++i) r *= static_cast<double>(k - i);
    return r;
}

/// Gauss-Legendre remainder constant 2^{2q+1} (q!)^4 / ((2q+1) ((2q)!)^3).
inline double gl_remainder_constant(int q) {
    double lg = (2.0 * q + 1) * std::log(2.0) + 4 * std::lgamma(q + 1.0) - std::log(2.0 * q + 1) - 3 * std::lgamma(2.0 * q + 1);
    return std::exp(lg);
}

}  // namespace detail

/// Estimated number of quadrature panels for C_n; used to refuse work that
/// would not finish.
inline double correlation_cost(const TlcFunction& F, const TlcFunction& G, int n, const APComplex& cx) {
    const int e = n - G.level + F.level;
    const TlcFunction& P = e >= 0 ? F : G;
    const TlcFunction& Q = e >= 0 ? G : F;
    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& ed : cx.edges) vmin = std::min(vmin, ed.length);
    const double stretch = std::pow(cx.lambda, std::abs(e));
    double cost = 0;
    for (const auto& per : P.pieces)
        for (const auto& p : per) cost += ((p.hi - p.lo) * stretch / vmin + 2) * static_cast<double>(std::max<std::size_t>(1, Q.num_pieces() / std::max<std::size_t>(1, cx.num_edges())));
    return cost;
}

/// C_n = integral of f * (g o Phi^n) against the invariant measure, where f and g
/// are realized at levels j and k: the integrand on the approximant is
/// F(z) G(gamma^{n - k + j} z).
inline CorrelationValue correlation(const TlcFunction& F, const TlcFunction& G, int n, const APComplex& cx, const CorrelationOptions& opt = {}) {
    const int e = n - G.level + F.level;
    const TlcFunction& P = e >= 0 ? F : G;  // pushed forward
    const TlcFunction& Q = e >= 0 ? G : F;  // evaluated at the end
    const int steps = std::abs(e);
    const double cost = correlation_cost(F, G, n, cx);
    if (cost > opt.max_panels)
        throw Error(ErrorKind::Infeasible, "correlation at n = " + std::to_string(n) + " needs about " + std::to_string(static_cast<long long>(cost)) + " panels");
    const Solenoid sol(cx);
    const auto [nodes, weights] = gauss_legendre(opt.order);
    const double remainder_c = detail::gl_remainder_constant(opt.order);
    const std::size_t deriv = static_cast<std::size_t>(2 * opt.order);

    CorrelationValue out;
    out.n = n;
    long double total = 0;
    double err = 0;
    const double lam = cx.lambda;

    for (std::size_t e0 = 0; e0 < cx.num_edges(); ++e0) {
        const double rho = cx.density[e0];
        for (const auto& p : P.pieces[e0]) {
            // current position = A * delta + B, delta = s - p.center on the starting edge
            std::function<void(int, double, double, int, double, double)> push = [&](int edge, double a, double b, int left, double A, double B) {
                if (left == 0) {
                    for (const auto& q : Q.pieces[static_cast<std::size_t>(edge)]) {
                        const double lo = std::max(a, q.lo), hi = std::min(b, q.hi);
                        if (!(hi > lo)) continue;
                        const double d0 = (lo - B) / A, d1 = (hi - B) / A;
                        const double mid = 0.5 * (d0 + d1), half = 0.5 * (d1 - d0);
                        // both factors as polynomials in x on [-1, 1]
                        const RealPoly pf = compose_affine(p.q, p.scale * half, p.scale * mid);
                        const RealPoly qf = compose_affine(q.q, q.scale * A * half, q.scale * (A * mid + B - q.center));
                        RealPoly prod = poly_mul(pf, qf);
                        const double c = rho * p.amp * q.amp * half;
                        double sum = 0, abs_sum = 0;
                        for (std::size_t i = 0; i < nodes.size(); ++i) {
                            const double v = weights[i] * evaluate(prod, nodes[i]);
                            sum += v;
                            abs_sum += std::abs(v);
                        }
                        total += static_cast<long double>(c * sum);
                        double dmax = 0;
                        for (std::size_t k = deriv; k < prod.size(); ++k) dmax += std::abs(prod[k]) * detail::falling(k, deriv);
                        err += std::abs(c) * (remainder_c * dmax + 64 * std::numeric_limits<double>::epsilon() * abs_sum * static_cast<double>(prod.size()));
                        ++out.panels;
                    }
                    return;
                }
                const auto& off = sol.path_offsets(edge);
                const auto& path = cx.edges[static_cast<std::size_t>(edge)].path;
                const double la = lam * a, lb = lam * b;
                for (std::size_t i = 0; i < path.size(); ++i) {
                    const double lo = std::max(la, off[i]), hi = std::min(lb, off[i + 1]);
                    if (!(hi > lo)) continue;
                    push(path[i], lo - off[i], hi - off[i], left - 1, lam * A, lam * B - off[i]);
                }
            };
            push(static_cast<int>(e0), p.lo, p.hi, steps, 1.0, p.center);
        }
    }
    out.value = static_cast<double>(total);
    out.error_bound = err;
    return out;
}

inline std::vector<CorrelationValue> correlation_sequence(const TlcFunction& F, const TlcFunction& G, int n_max, const APComplex& cx,
                                                          const CorrelationOptions& opt = {}) {
    for (int n = 0; n <= n_max; ++n)
        if (correlation_cost(F, G, n, cx) > opt.max_panels)
            throw Error(ErrorKind::Infeasible, "n_max = " + std::to_string(n_max) + " is out of reach; the largest feasible n is " + std::to_string(n - 1));
    std::vector<CorrelationValue> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(correlation(F, G, n, cx, opt));
    return out;
}

/// Integral of F against the invariant measure on the approximant.
inline double integrate(const TlcFunction& F, const APComplex& cx) {
    return correlation(F, constant_tlc(cx, 1.0), -F.level, cx).value;
}

}  // namespace wieler
