#pragma once
// The cohomological equation h = u o sigma - u for cylinder functions:
// the obstruction class in the eventual range of H^1, a Birkhoff-sum
// boundedness scan, and construction of the transfer function.

#include "wieler/analysis.hpp"
#include "wieler/dynamics.hpp"
#include "wieler/function_spaces.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wieler {

struct ObstructionVector {
    std::size_t K = 0;       // pieces 0..K summed
    double alpha = 0;
    std::vector<std::vector<double>> increments;    // eventual-range coordinates of each piece
    std::vector<std::vector<double>> partial_sums;
    std::vector<double> coords;
    double norm = 0;
    double base = 0;         // lambda^{-(alpha-1)} rho(A_ER^{-1})
    double C = 0;            // increments bounded by C base^k
    bool convergent = false;

    [[nodiscard]] bool is_zero(double tol = 1e-6) const { return norm <= tol; }
};

namespace detail {

inline Eigen::MatrixXd to_dense(const RatMatrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    return out;
}

inline double vec_norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace detail

/// Edge cochain of a level-k cylinder function at supertile level J: each
/// tile boundary inside the supertile carries the value of the context word
/// starting there, the two ends carry half.
inline std::vector<double> boundary_cochain(const CylinderFunction& g, const Analysis& an, unsigned J) {
    const auto& cx = an.complex;
    const int d = cx.collared.depth;
    const std::size_t K = g.level;
    std::vector<double> c(cx.num_edges(), 0.0);
    for (std::size_t e = 0; e < cx.num_edges(); ++e) {
        const Word& w = cx.collared.words[e];
        Word ctx = an.rule.iterate({w[static_cast<std::size_t>(d)]}, J);
        const std::size_t m = ctx.size();
        const Word z = an.rule.iterate({w[static_cast<std::size_t>(d + 1)]}, J);
        ctx.insert(ctx.end(), z.begin(), z.end());
        for (std::size_t i = 0; i <= m; ++i) {
            const double v = g(Word(ctx.begin() + static_cast<long>(i), ctx.begin() + static_cast<long>(i + K + 1)));
            c[e] += (i == 0 || i == m) ? 0.5 * v : v;
        }
    }
    return c;
}

/// Eventual-range coordinates, at the reference level, of the class of a
/// cochain living at supertile level J.
inline std::vector<double> eventual_coordinates(const std::vector<double>& cochain, const Analysis& an, unsigned J) {
    const auto& h = an.cohomology;
    const auto h1 = h.h1_of(cochain);
    const auto n = static_cast<Eigen::Index>(h1.size());
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = h1[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd A = detail::to_dense(h.A.cast<Rational>());
    for (std::size_t k = 0; k < h.h1_rank; ++k) x = A * x;
    const Eigen::MatrixXd B = detail::to_dense(h.ER_basis);
    Eigen::VectorXd y = B.colPivHouseholderQr().solve(x);
    const Eigen::MatrixXd Ainv = detail::to_dense(h.A_ER).inverse();
    for (unsigned k = 0; k < J; ++k) y = Ainv * y;
    return {y.data(), y.data() + y.size()};
}

inline double obstruction_base(const Analysis& an, double alpha) {
    const Eigen::MatrixXd Ainv = detail::to_dense(an.cohomology.A_ER).inverse();
    const double rho = Ainv.eigenvalues().cwiseAbs().maxCoeff();
    return std::pow(an.lambda(), -(alpha - 1)) * rho;
}

inline ObstructionVector obstruction_vector(const Analysis& an, const CylinderFunction& h, double alpha, std::size_t K) {
    ObstructionVector ob;
    ob.alpha = alpha;
    ob.K = std::min(K, h.level);
    ob.base = obstruction_base(an, alpha);
    ob.convergent = ob.base < 1;
    require_measure(an.measure, h.level + 1);
    const auto pieces = canonical_pieces(h, an.measure);
    const std::size_t dim = an.cohomology.er_dim();
    std::vector<double> acc(dim, 0.0);
    for (std::size_t k = 0; k <= ob.K; ++k) {
        const unsigned J = level_for_length(an.rule, k + 1);
        const auto inc = eventual_coordinates(boundary_cochain(pieces[k], an, J), an, J);
        for (std::size_t i = 0; i < dim; ++i) acc[i] += inc[i];
        ob.increments.push_back(inc);
        ob.partial_sums.push_back(acc);
        const double n = detail::vec_norm(inc);
        if (n > 0) ob.C = std::max(ob.C, n / std::pow(ob.base, static_cast<double>(k)));
    }
    ob.coords = acc;
    ob.norm = detail::vec_norm(acc);
    return ob;
}

struct ObstructionRank {
    std::size_t rank = 0;
    std::size_t beta1 = 0;
    std::size_t er_dim = 0;
    std::vector<double> singular_values;
};

/// Rank of the obstruction map on the indicators of all legal words of
/// length level + 1 (these span the functions of that level).
inline ObstructionRank obstruction_rank(const Analysis& an, std::size_t level, double alpha) {
    const auto words = an.measure.words(level + 1);
    const auto dim = static_cast<Eigen::Index>(an.cohomology.er_dim());
    Eigen::MatrixXd M(dim, static_cast<Eigen::Index>(words.size()));
    for (std::size_t j = 0; j < words.size(); ++j) {
        const auto ob = obstruction_vector(an, indicator(an.measure, words[j]), alpha, level);
        for (Eigen::Index i = 0; i < dim; ++i) M(i, static_cast<Eigen::Index>(j)) = ob.coords[static_cast<std::size_t>(i)];
    }
    ObstructionRank r;
    r.beta1 = an.cohomology.h1_rank;
    r.er_dim = an.cohomology.er_dim();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        r.singular_values.push_back(sv(i));
        if (sv(i) > 1e-9 * std::max(1.0, sv(0))) ++r.rank;
    }
    return r;
}

/// Birkhoff sums S_n h along the fixed point, n <= N.
inline std::vector<double> birkhoff_sums(const Analysis& an, const CylinderFunction& h, std::size_t N) {
    const Word x = fixed_point_prefix(an.rule, N + h.level + 1);
    std::vector<double> S(N + 1, 0.0);
    for (std::size_t n = 0; n < N; ++n)
        S[n + 1] = S[n] + h(Word(x.begin() + static_cast<long>(n), x.begin() + static_cast<long>(n + h.level + 1)));
    return S;
}

struct GhScan {
    std::size_t N = 0;
    double sup = 0;
    double mean = 0;   // S_N / N
    double power = 0;  // running max grows like n^power
    std::string verdict;  // "bounded", "linear", "power"
};

inline GhScan gottschalk_hedlund_scan(const Analysis& an, const CylinderFunction& h, std::size_t N) {
    const auto S = birkhoff_sums(an, h, N);
    GhScan g;
    g.N = N;
    std::vector<double> run(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) run[n] = std::max(run[n - 1], std::abs(S[n]));
    g.sup = run[N];
    g.mean = S[N] / static_cast<double>(N);
    // log-log slope of the running max over dyadic n in [N / 1024, N]
    std::vector<double> xs, ys;
    for (std::size_t n = N; n >= std::max<std::size_t>(16, N / 1024); n /= 2) {
        if (run[n] <= 0) continue;
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(run[n]));
    }
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
        g.power = sxy / sxx;
    }
    if (g.sup == 0 || g.power < 0.1) g.verdict = "bounded";
    else if (g.power > 0.9) g.verdict = "linear";
    else g.verdict = "power";
    return g;
}

/// sup over legal words of length `length` of |h - (u o sigma - u)|.
inline double verify_coboundary(const Analysis& an, const CylinderFunction& h, const CylinderFunction& u, std::size_t length) {
    length = std::max({length, h.level + 1, u.level + 2});
    double worst = 0;
    for (const auto& w : language(an.rule, length)) {
        const double lhs = h(w);
        const double rhs = u(Word(w.begin() + 1, w.end())) - u(w);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// u o sigma - u at level u.level + 1.
inline CylinderFunction coboundary_of(const CylinderFunction& u, const InvariantMeasure& mu) {
    return make_function(mu, u.level + 1, [&](const Word& w) { return u(Word(w.begin() + 1, w.end())) - u(w); });
}

struct TransferSolution {
    CylinderFunction u;
    double residual = 0;
    std::optional<HolderCertificate> holder;  // at exponent alpha - 2
    std::vector<double> level_bound;          // lambda^{-k(alpha-2)} / (1 - lambda^{-(alpha-2)})
    std::size_t steps_used = 0;
};

struct TransferResult {
    bool solved = false;
    std::optional<TransferSolution> solution;
    ObstructionVector obstruction;
    std::string reason;
};

struct TransferOptions {
    std::size_t scan_length = 1000000;
    double tolerance = 1e-6;
    bool override_obstruction = false;
    std::size_t check_length = 0;  // 0: depth + 2
};

/// u on words of length `depth`: the value at the first visit of the fixed
/// point to that word is the Birkhoff sum up to the visit; u(fixed point) = 0.
inline TransferResult solve_transfer(const Analysis& an, const CylinderFunction& h, double alpha, std::size_t depth, const TransferOptions& opt = {}) {
    if (depth == 0) throw Error(ErrorKind::InvalidArgument, "depth must be positive");
    TransferResult res;
    res.obstruction = obstruction_vector(an, h, alpha, h.level);
    if (!opt.override_obstruction && (!res.obstruction.convergent || !res.obstruction.is_zero(opt.tolerance))) {
        res.reason = !res.obstruction.convergent ? "obstruction series does not converge for this alpha"
                                                 : "obstruction is nonzero beyond tolerance";
        return res;
    }
    const auto words = language(an.rule, depth);
    std::set<Word> pending(words.begin(), words.end());
    const std::size_t span = std::max(depth, h.level + 1);
    const Word x = fixed_point_prefix(an.rule, opt.scan_length + span);
    TransferSolution sol;
    sol.u.level = depth - 1;
    double S = 0;
    std::size_t n = 0;
    for (; n < opt.scan_length && !pending.empty(); ++n) {
        Word w(x.begin() + static_cast<long>(n), x.begin() + static_cast<long>(n + depth));
        if (pending.erase(w)) sol.u.values[w] = S;
        S += h(Word(x.begin() + static_cast<long>(n), x.begin() + static_cast<long>(n + h.level + 1)));
    }
    if (!pending.empty())
        throw Error(ErrorKind::DepthFailure, std::to_string(pending.size()) + " words of length " + std::to_string(depth) + " unvisited after " +
                                                 std::to_string(opt.scan_length) + " steps; increase the scan length or reduce the depth");
    sol.steps_used = n;
    sol.residual = verify_coboundary(an, h, sol.u, opt.check_length ? opt.check_length : depth + 2);
    const double beta = alpha - 2;
    if (beta > 0) {
        sol.holder = holder_seminorm(sol.u, beta, an.lambda());
        const double q = std::pow(an.lambda(), -beta);
        for (std::size_t k = 0; k < depth; ++k) sol.level_bound.push_back(std::pow(q, static_cast<double>(k)) / (1 - q));
    }
    res.solved = true;
    res.solution = sol;
    return res;
}

}  // namespace wieler
