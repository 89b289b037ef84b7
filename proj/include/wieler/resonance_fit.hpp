#pragma once
// Exponential fitting of sequences: linear-prediction (Prony) extraction of
// decay rates from correlation sequences, and growth-rate fits with
// polylogarithmic corrections.

#include "wieler/polynomial.hpp"
#include "wieler/substitution.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace wieler {

struct ResonanceFit {
    std::vector<Complex> rates;       // sorted by modulus, largest first
    std::vector<Complex> amplitudes;  // x_n ~ sum b_i z_i^n
    double residual = 0;              // rms misfit on the window
    double condition = 0;
    bool ill_conditioned = false;
    int n_lo = 0, n_hi = 0;
    std::string note;
};

struct FitWindow {
    int lo = 0, hi = 0;
};

/// Window of usable n: starts once |x_n| < |x_0| / 2 and stops before the
/// first value within 10 error bounds of zero.
inline FitWindow auto_window(const std::vector<double>& x, const std::vector<double>& err, std::size_t m) {
    FitWindow w{0, static_cast<int>(x.size()) - 1};
    for (std::size_t n = 0; n < x.size(); ++n)
        if (std::abs(x[n]) < 0.5 * std::abs(x[0])) {
            w.lo = static_cast<int>(n);
            break;
        }
    // the floor is where the tail stays under it; isolated near-zeros (sign changes) are data
    w.hi = w.lo - 1;
    for (std::size_t n = static_cast<std::size_t>(w.lo); n < x.size(); ++n) {
        const double e = n < err.size() ? err[n] : 0.0;
        if (std::abs(x[n]) > 10 * e) w.hi = static_cast<int>(n);
    }
    if (w.hi - w.lo + 1 < static_cast<int>(2 * m + 1)) w.lo = std::max(0, w.hi - static_cast<int>(2 * m));
    if (w.hi - w.lo + 1 < static_cast<int>(2 * m + 1))
        throw Error(ErrorKind::Infeasible, "the error floor is reached before a fitting window of " + std::to_string(2 * m + 1) + " points");
    return w;
}

/// Fit x_n ~ sum_{i<m} b_i z_i^n on [lo, hi] by least-squares linear prediction.
inline ResonanceFit prony(const std::vector<double>& x, std::size_t m, FitWindow w, double cond_limit = 1e8) {
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "number of rates must be positive");
    const int N = w.hi - w.lo + 1;
    if (w.lo < 0 || w.hi >= static_cast<int>(x.size()) || N < static_cast<int>(2 * m + 1))
        throw Error(ErrorKind::Infeasible, "window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "] too short for " + std::to_string(m) + " rates");
    const Eigen::Index rows = N - static_cast<Eigen::Index>(m), M = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd H(rows, M);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index t = 0; t < rows; ++t) {
        const std::size_t base = static_cast<std::size_t>(w.lo + t);
        rhs(t) = x[base + m];
        for (Eigen::Index i = 0; i < M; ++i) H(t, i) = x[base + m - 1 - static_cast<std::size_t>(i)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    ResonanceFit fit;
    fit.n_lo = w.lo;
    fit.n_hi = w.hi;
    fit.condition = sv(M - 1) > 0 ? sv(0) / sv(M - 1) : std::numeric_limits<double>::infinity();
    fit.ill_conditioned = !(fit.condition < cond_limit);
    if (fit.ill_conditioned) fit.note = "prediction matrix condition number " + std::to_string(fit.condition) + "; rates are unreliable";
    const Eigen::VectorXd a = svd.solve(rhs);
    // z^m - a_1 z^{m-1} - ... - a_m
    RealPoly p(m + 1, 0.0);
    p[m] = 1;
    for (std::size_t i = 0; i < m; ++i) p[m - 1 - i] = -a(static_cast<Eigen::Index>(i));
    if (m == 1) {
        fit.rates = {Complex(-p[0], 0.0)};
    } else {
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M, M);
        for (Eigen::Index i = 1; i < M; ++i) C(i, i - 1) = 1;
        for (Eigen::Index i = 0; i < M; ++i) C(i, M - 1) = -p[static_cast<std::size_t>(i)];
        Eigen::EigenSolver<Eigen::MatrixXd> es(C);
        for (Eigen::Index i = 0; i < M; ++i) fit.rates.push_back(es.eigenvalues()(i));
    }
    std::sort(fit.rates.begin(), fit.rates.end(), [](const Complex& u, const Complex& v) {
        if (std::abs(std::abs(u) - std::abs(v)) > 1e-12) return std::abs(u) > std::abs(v);
        return std::arg(u) < std::arg(v);
    });
    // amplitudes from the Vandermonde system
    Eigen::MatrixXcd V(N, M);
    Eigen::VectorXcd y(N);
    for (int n = 0; n < N; ++n) {
        y(n) = x[static_cast<std::size_t>(w.lo + n)];
        for (Eigen::Index i = 0; i < M; ++i) V(n, i) = std::pow(fit.rates[static_cast<std::size_t>(i)], w.lo + n);
    }
    const Eigen::VectorXcd b = V.colPivHouseholderQr().solve(y);
    for (Eigen::Index i = 0; i < M; ++i) fit.amplitudes.push_back(b(i));
    fit.residual = std::sqrt((V * b - y).squaredNorm() / N);
    return fit;
}

inline ResonanceFit extract_resonances(const std::vector<double>& x, const std::vector<double>& err, std::size_t m,
                                       std::optional<FitWindow> window = std::nullopt, double cond_limit = 1e8) {
    return prony(x, m, window ? *window : auto_window(x, err, m), cond_limit);
}

struct GrowthFit {
    double slope = 0;      // exponent in |x_n| ~ lambda^{slope n} n^{p}
    double log_power = 0;  // p
    double constant = 0;
    double residual = 0;
    bool with_log = false;
};

/// Least squares for log|x_n| = c + slope * n log(lambda) [+ p log n] over n in [lo, hi].
/// Zero entries are skipped.
inline GrowthFit fit_growth(const std::vector<double>& x, int lo, int hi, double lambda, bool with_log = false) {
    std::vector<std::array<double, 3>> rows;
    std::vector<double> ys;
    for (int n = std::max(lo, with_log ? 1 : 0); n <= hi && n < static_cast<int>(x.size()); ++n) {
        if (x[static_cast<std::size_t>(n)] == 0.0) continue;
        rows.push_back({1.0, n * std::log(lambda), std::log(static_cast<double>(n))});
        ys.push_back(std::log(std::abs(x[static_cast<std::size_t>(n)])));
    }
    const Eigen::Index k = with_log ? 3 : 2;
    if (static_cast<Eigen::Index>(ys.size()) <= k) throw Error(ErrorKind::Infeasible, "too few nonzero points for a growth fit");
    Eigen::MatrixXd A(static_cast<Eigen::Index>(ys.size()), k);
    Eigen::VectorXd b(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < ys.size(); ++i) {
        for (Eigen::Index j = 0; j < k; ++j) A(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
        b(static_cast<Eigen::Index>(i)) = ys[i];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    GrowthFit g;
    g.constant = c(0);
    g.slope = c(1);
    g.with_log = with_log;
    if (with_log) g.log_power = c(2);
    g.residual = std::sqrt((A * c - b).squaredNorm() / static_cast<double>(ys.size()));
    return g;
}

struct GrowthComponent {
    Complex rate;
    double exponent = 0;          // log|rate| / log lambda
    std::size_t multiplicity = 1; // clustered roots; log power is multiplicity - 1
    Complex amplitude;
};

/// Prony on the full sequence; roots closer than cluster_tol are merged and
/// their count is reported as a log-power marker.
inline std::vector<GrowthComponent> fit_growth_components(const std::vector<double>& x, std::size_t m, double lambda, double cluster_tol = 1e-3) {
    const auto fit = prony(x, m, {0, static_cast<int>(x.size()) - 1}, std::numeric_limits<double>::infinity());
    std::vector<GrowthComponent> out;
    std::vector<bool> used(fit.rates.size(), false);
    for (std::size_t i = 0; i < fit.rates.size(); ++i) {
        if (used[i]) continue;
        GrowthComponent c;
        Complex sum = fit.rates[i];
        c.amplitude = fit.amplitudes[i];
        for (std::size_t j = i + 1; j < fit.rates.size(); ++j)
            if (!used[j] && std::abs(fit.rates[j] - fit.rates[i]) < cluster_tol * std::max(1.0, std::abs(fit.rates[i]))) {
                used[j] = true;
                sum += fit.rates[j];
                c.multiplicity += 1;
            }
        c.rate = sum / static_cast<double>(c.multiplicity);
        c.exponent = std::log(std::abs(c.rate)) / std::log(lambda);
        out.push_back(c);
    }
    return out;
}

}  // namespace wieler
