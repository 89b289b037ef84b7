#pragma once
// Ergodic sums over supertiles. S_n(e) is the sum of a cylinder function
// over the level-n supertile of the collared letter e; the collared
// substitution turns this into S_{n+1} = G1 S_n once supertiles are long
// enough to carry the context words.

#include "wieler/ap_complex.hpp"
#include "wieler/dynamics.hpp"
#include "wieler/function_spaces.hpp"
#include "wieler/resonance_fit.hpp"
#include "wieler/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace wieler {

struct SupertileSums {
    int n0 = 0;                           // first level computed directly
    bool weighted = false;                // flow-weighted: each tile counts with its length
    std::vector<std::vector<double>> S;   // S[n][e]; rows before n0 are empty

    [[nodiscard]] int n_max() const { return static_cast<int>(S.size()) - 1; }
    [[nodiscard]] double sup(int n) const {
        double m = 0;
        for (double v : S[static_cast<std::size_t>(n)]) m = std::max(m, std::abs(v));
        return m;
    }
};

inline SupertileSums supertile_sums(const CylinderFunction& f, const APComplex& cx, const SubstitutionRule& rule, const PerronData& pd, int n_max,
                                    bool weighted = false) {
    const std::size_t K = f.level;
    SupertileSums out;
    out.weighted = weighted;
    out.n0 = static_cast<int>(level_for_length(rule, std::max<std::size_t>(K, 1)));
    if (out.n0 > n_max) throw Error(ErrorKind::Infeasible, "n_max is below the first level where supertiles carry the context");
    const int d = cx.collared.depth;
    out.S.assign(static_cast<std::size_t>(n_max) + 1, {});
    std::vector<double> cur(cx.num_edges(), 0.0);
    double work = 0;
    for (std::size_t e = 0; e < cx.num_edges(); ++e) {
        const Word& w = cx.collared.words[e];
        Word ctx = rule.iterate({w[static_cast<std::size_t>(d)]}, static_cast<unsigned>(out.n0));
        const std::size_t m = ctx.size();
        work += static_cast<double>(m);
        if (work > 5e7) throw Error(ErrorKind::Infeasible, "base level supertiles are too long");
        const Word z = rule.iterate({w[static_cast<std::size_t>(d + 1)]}, static_cast<unsigned>(out.n0));
        ctx.insert(ctx.end(), z.begin(), z.end());
        for (std::size_t p = 0; p < m; ++p) {
            const double v = f(Word(ctx.begin() + static_cast<long>(p), ctx.begin() + static_cast<long>(p + K + 1)));
            cur[e] += weighted ? v * pd.left_vec[static_cast<std::size_t>(ctx[p])] : v;
        }
    }
    const auto G1 = induced_cochain_maps(cx).G1;
    out.S[static_cast<std::size_t>(out.n0)] = cur;
    for (int n = out.n0 + 1; n <= n_max; ++n) {
        std::vector<double> next(cx.num_edges(), 0.0);
        for (std::size_t e = 0; e < cx.num_edges(); ++e)
            for (std::size_t e2 = 0; e2 < cx.num_edges(); ++e2) next[e] += G1(e, e2).convert_to<double>() * cur[e2];
        cur = next;
        out.S[static_cast<std::size_t>(n)] = cur;
    }
    return out;
}

struct DirectionFit {
    Complex eigenvalue;
    std::size_t multiplicity = 1;
    std::size_t largest_block = 1;
    double predicted_exponent = 0;  // log|nu| / log lambda
    double weight = 0;              // size of the component at the base level
    std::optional<GrowthFit> fit;
    std::optional<std::size_t> table_row;
};

struct DeviationReport {
    int window_lo = 0, window_hi = 0;
    std::vector<double> sup_by_level;  // max_e |S_n(e)|
    std::optional<GrowthFit> overall;
    bool bounded = false;
    bool zero = false;
    std::vector<DirectionFit> directions;
    std::string note;
};

/// Fit the growth of the supertile sums, overall and along each generalized
/// eigenspace of gamma* on cochains.
inline DeviationReport fit_deviation(const SupertileSums& sums, const APComplex& cx, const DeviationExponentTable& table,
                                     std::optional<FitWindow> window = std::nullopt) {
    DeviationReport rep;
    const int nmax = sums.n_max();
    const double lambda = cx.lambda;
    rep.window_lo = window ? window->lo : std::max(sums.n0, nmax / 2);
    rep.window_hi = window ? window->hi : nmax;
    rep.sup_by_level.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    double biggest = 0;
    for (int n = sums.n0; n <= nmax; ++n) {
        rep.sup_by_level[static_cast<std::size_t>(n)] = sums.sup(n);
        biggest = std::max(biggest, sums.sup(n));
    }
    if (biggest == 0.0) {
        rep.zero = true;
        rep.bounded = true;
        rep.note = "all supertile sums vanish; the function lies in no growth direction";
        return rep;
    }
    rep.overall = fit_growth(rep.sup_by_level, rep.window_lo, rep.window_hi, lambda);
    rep.bounded = rep.overall->slope < 0.05;

    // generalized eigenspaces of G1
    const auto G1 = induced_cochain_maps(cx).G1;
    const auto E = static_cast<Eigen::Index>(cx.num_edges());
    Eigen::MatrixXcd g(E, E);
    for (Eigen::Index i = 0; i < E; ++i)
        for (Eigen::Index j = 0; j < E; ++j) g(i, j) = G1(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).convert_to<double>();
    const auto eigs = jordan_structure(G1);
    Eigen::MatrixXcd V(E, 0);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> span;
    for (const auto& ev : eigs) {
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(E, E);
        for (std::size_t k = 0; k < ev.multiplicity; ++k) p = p * (g - ev.value * Eigen::MatrixXcd::Identity(E, E));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p, Eigen::ComputeFullV);
        const auto m = static_cast<Eigen::Index>(ev.multiplicity);
        const Eigen::MatrixXcd basis = svd.matrixV().rightCols(m);
        span.push_back({V.cols(), m});
        V.conservativeResize(E, V.cols() + m);
        V.rightCols(m) = basis;
    }
    if (V.cols() != E) throw std::logic_error("generalized eigenspaces do not fill the cochain space");
    Eigen::VectorXcd s0(E);
    for (Eigen::Index i = 0; i < E; ++i) s0(i) = sums.S[static_cast<std::size_t>(sums.n0)][static_cast<std::size_t>(i)];
    const Eigen::VectorXcd y = V.fullPivLu().solve(s0);
    const double scale = s0.cwiseAbs().maxCoeff();

    for (std::size_t k = 0; k < eigs.size(); ++k) {
        DirectionFit d;
        d.eigenvalue = eigs[k].value;
        d.multiplicity = eigs[k].multiplicity;
        d.largest_block = eigs[k].largest_block();
        d.predicted_exponent = std::abs(d.eigenvalue) > 0 ? std::log(std::abs(d.eigenvalue)) / std::log(lambda) : -std::numeric_limits<double>::infinity();
        Eigen::VectorXcd comp = V.middleCols(span[k].first, span[k].second) * y.segment(span[k].first, span[k].second);
        d.weight = comp.cwiseAbs().maxCoeff();
        for (std::size_t r = 0; r < table.rows.size(); ++r)
            if (std::abs(table.rows[r].value - d.eigenvalue) < 1e-8) {
                d.table_row = r;
                break;
            }
        if (d.weight > 1e-9 * scale && std::abs(d.eigenvalue) > 1e-12) {
            std::vector<double> x(static_cast<std::size_t>(nmax) + 1, 0.0);
            for (int n = sums.n0; n <= nmax; ++n) {
                x[static_cast<std::size_t>(n)] = comp.cwiseAbs().maxCoeff();
                comp = g * comp;
            }
            try {
                d.fit = fit_growth(x, rep.window_lo, rep.window_hi, lambda, d.largest_block > 1);
            } catch (const Error&) {
            }
        }
        rep.directions.push_back(d);
    }
    return rep;
}

}  // namespace wieler
