#pragma once
// Polynomials over Z, Q and R. Coefficients are stored from degree 0 upward.

#include "wieler/exact.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wieler {

using RatPoly = std::vector<Rational>;
using IntPoly = std::vector<Integer>;
using RealPoly = std::vector<double>;
using Complex = std::complex<double>;

template <class T>
void trim(std::vector<T>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <class T>
int degree(const std::vector<T>& p) {
    for (std::size_t i = p.size(); i > 0; --i)
        if (p[i - 1] != 0) return static_cast<int>(i) - 1;
    return -1;
}

inline RatPoly to_rational(const IntPoly& p) { return RatPoly(p.begin(), p.end()); }

inline IntPoly to_integer(const RatPoly& p) {
    IntPoly out;
    for (const auto& c : p) {
        if (denominator(c) != 1) throw std::domain_error("polynomial has non-integral coefficients");
        out.push_back(numerator(c));
    }
    return out;
}

inline RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly c(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

inline RatPoly poly_sub(RatPoly a, const RatPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

/// Quotient and remainder of a / b.
inline std::pair<RatPoly, RatPoly> poly_divmod(RatPoly a, const RatPoly& b) {
    const int db = degree(b);
    if (db < 0) throw std::domain_error("polynomial division by zero");
    trim(a);
    const int da = degree(a);
    if (da < db) return {RatPoly{}, a};
    RatPoly q(static_cast<std::size_t>(da - db + 1), Rational(0));
    for (int k = da - db; k >= 0; --k) {
        const Rational coef = a[static_cast<std::size_t>(k + db)] / b[static_cast<std::size_t>(db)];
        q[static_cast<std::size_t>(k)] = coef;
        if (coef == 0) continue;
        for (int j = 0; j <= db; ++j) a[static_cast<std::size_t>(k + j)] -= coef * b[static_cast<std::size_t>(j)];
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline RatPoly make_monic(RatPoly p) {
    trim(p);
    if (p.empty()) return p;
    const Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

inline RatPoly derivative(const RatPoly& p) {
    RatPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long long>(i)));
    trim(d);
    return d;
}

inline Rational evaluate(const RatPoly& p, const Rational& x) {
    Rational y = 0;
    for (std::size_t i = p.size(); i > 0; --i) y = y * x + p[i - 1];
    return y;
}

inline RatMatrix evaluate(const RatPoly& p, const RatMatrix& a) {
    RatMatrix y(a.rows(), a.cols());
    for (std::size_t i = p.size(); i > 0; --i) {
        y = y * a;
        for (std::size_t k = 0; k < a.rows(); ++k) y(k, k) += p[i - 1];
    }
    return y;
}

inline RatPoly poly_pow(const RatPoly& p, unsigned e) {
    RatPoly r{Rational(1)};
    for (unsigned i = 0; i < e; ++i) r = poly_mul(r, p);
    return r;
}

/// Yun's square-free decomposition: f = c * prod_i g_i^i, g_i monic, squarefree, coprime.
inline std::vector<RatPoly> squarefree_decomposition(const RatPoly& f_in) {
    RatPoly f = make_monic(f_in);
    std::vector<RatPoly> out;
    if (degree(f) <= 0) return out;
    RatPoly fp = derivative(f);
    RatPoly a = poly_gcd(f, fp);
    RatPoly b = poly_divmod(f, a).first;
    RatPoly c = poly_divmod(fp, a).first;
    RatPoly d = poly_sub(c, derivative(b));
    while (degree(b) > 0) {
        RatPoly g = poly_gcd(b, d);
        out.push_back(g);
        b = poly_divmod(b, g).first;
        c = poly_divmod(d, g).first;
        d = poly_sub(c, derivative(b));
    }
    while (!out.empty() && degree(out.back()) == 0) out.pop_back();
    return out;
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }
inline double to_double(const Integer& r) { return static_cast<double>(r); }

/// Numerical roots via the companion matrix, each polished by Newton steps
/// in long double.
inline std::vector<Complex> numeric_roots(const RatPoly& p_in) {
    RatPoly p = make_monic(p_in);
    const int n = degree(p);
    if (n <= 0) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -to_double(p[static_cast<std::size_t>(i)]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<Complex> roots;
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);

    std::vector<std::complex<long double>> coeff;
    for (const auto& c : p) coeff.emplace_back(static_cast<long double>(to_double(c)), 0.0L);
    for (auto& r : roots) {
        std::complex<long double> z(r.real(), r.imag());
        for (int it = 0; it < 50; ++it) {
            std::complex<long double> f = 0, df = 0;
            for (std::size_t i = coeff.size(); i > 0; --i) {
                df = df * z + f;
                f = f * z + coeff[i - 1];
            }
            if (std::abs(df) == 0.0L) break;
            const auto step = f / df;
            z -= step;
            if (std::abs(step) <= 1e-18L * std::max<long double>(1.0L, std::abs(z))) break;
        }
        r = Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        if (std::abs(r.imag()) < 1e-14 * std::max(1.0, std::abs(r.real()))) r = Complex(r.real(), 0.0);
    }
    return roots;
}

inline std::vector<Integer> divisors(Integer n) {
    if (n < 0) n = -n;
    std::vector<Integer> d;
    if (n == 0) return d;
    for (Integer k = 1; k * k <= n; ++k)
        if (n % k == 0) {
            d.push_back(k);
            if (k * k != n) d.push_back(n / k);
        }
    return d;
}

/// Rational roots of a polynomial with rational coefficients (rational root test).
inline std::vector<Rational> rational_roots(const RatPoly& p_in) {
    RatPoly p = make_monic(p_in);
    std::vector<Rational> roots;
    if (degree(p) <= 0) return roots;
    // clear denominators
    Integer l = 1;
    for (const auto& c : p) l = boost::multiprecision::lcm(l, denominator(c));
    IntPoly q;
    for (const auto& c : p) q.push_back(numerator(Rational(c * l)));
    std::size_t low = 0;
    while (low < q.size() && q[low] == 0) ++low;
    if (low > 0) roots.push_back(Rational(0));
    if (q[low] == 0) return roots;
    const auto num = divisors(q[low]);
    const auto den = divisors(q.back());
    for (const auto& a : num)
        for (const auto& b : den)
            for (int s : {1, -1}) {
                Rational cand(Integer(s) * a, b);
                if (std::find(roots.begin(), roots.end(), cand) != roots.end()) continue;
                if (evaluate(p, cand) == 0) roots.push_back(cand);
            }
    return roots;
}

/// Factor a monic squarefree integer polynomial into monic irreducibles
/// over Z: linear factors from the rational root test, then a search over
/// conjugation-closed subsets of the remaining numeric roots whose
/// product rounds to an integer polynomial that divides exactly.
inline std::vector<RatPoly> factor_squarefree(const RatPoly& p_in) {
    RatPoly p = make_monic(p_in);
    std::vector<RatPoly> factors;
    for (const auto& r : rational_roots(p)) {
        RatPoly lin{-r, Rational(1)};
        factors.push_back(lin);
        p = poly_divmod(p, lin).first;
    }
    if (degree(p) <= 0) return factors;

    auto roots = numeric_roots(p);
    std::vector<bool> used(roots.size(), false);
    std::size_t remaining = roots.size();
    const std::size_t n = roots.size();

    auto product_poly = [](const std::vector<Complex>& rs) {
        std::vector<Complex> c{Complex(1.0)};
        for (const auto& r : rs) {
            std::vector<Complex> next(c.size() + 1, Complex(0.0));
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= r * c[i];
            }
            c = std::move(next);
        }
        return c;
    };

    for (std::size_t size = 2; size <= n && remaining > 0; ++size) {
        if (size > remaining) break;
        if (size == remaining) break;  // the rest is irreducible
        bool found = true;
        while (found) {
            found = false;
            std::vector<std::size_t> free_idx;
            for (std::size_t i = 0; i < n; ++i)
                if (!used[i]) free_idx.push_back(i);
            if (free_idx.size() <= size) break;
            std::vector<bool> pick(free_idx.size(), false);
            std::fill(pick.begin(), pick.begin() + static_cast<long>(size), true);
            do {
                std::vector<Complex> rs;
                for (std::size_t i = 0; i < free_idx.size(); ++i)
                    if (pick[i]) rs.push_back(roots[free_idx[i]]);
                auto c = product_poly(rs);
                RatPoly cand;
                bool ok = true;
                for (const auto& x : c) {
                    const double re = std::round(x.real());
                    if (std::abs(x.imag()) > 1e-6 || std::abs(x.real() - re) > 1e-6 * std::max(1.0, std::abs(re))) {
                        ok = false;
                        break;
                    }
                    cand.push_back(Rational(static_cast<long long>(re)));
                }
                if (!ok) continue;
                auto [q, r] = poly_divmod(p, cand);
                if (!r.empty()) continue;
                factors.push_back(cand);
                p = q;
                for (std::size_t i = 0; i < free_idx.size(); ++i)
                    if (pick[i]) used[free_idx[i]] = true;
                remaining -= size;
                found = true;
                break;
            } while (std::prev_permutation(pick.begin(), pick.end()));
        }
    }
    if (degree(p) > 0) factors.push_back(make_monic(p));
    return factors;
}

inline std::string to_string(const RatPoly& p, const std::string& var = "x") {
    std::string s;
    for (int i = degree(p); i >= 0; --i) {
        const Rational c = p[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        const bool neg = c < 0;
        const Rational a = neg ? Rational(-c) : c;
        if (s.empty()) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        const bool unit = (a == 1);
        if (!unit || i == 0) s += a.str();
        if (i > 0) {
            if (!unit) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

// ---- real polynomials (bump profiles, quadrature integrands) ----

inline double evaluate(const RealPoly& p, double x) {
    double y = 0.0;
    for (std::size_t i = p.size(); i > 0; --i) y = y * x + p[i - 1];
    return y;
}

inline RealPoly derivative(const RealPoly& p) {
    RealPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<double>(i));
    return d;
}

inline RealPoly poly_mul(const RealPoly& a, const RealPoly& b) {
    if (a.empty() || b.empty()) return {};
    RealPoly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// p(a*x + b) as a polynomial in x.
inline RealPoly compose_affine(const RealPoly& p, double a, double b) {
    RealPoly out{0.0};
    RealPoly lin{b, a};
    for (std::size_t i = p.size(); i > 0; --i) {
        out = poly_mul(out, lin);
        if (out.empty()) out = {0.0};
        out[0] += p[i - 1];
    }
    return out;
}

/// sup of |p| on [lo, hi], from critical points and endpoints.
inline double sup_abs(const RealPoly& p, double lo, double hi) {
    double best = std::max(std::abs(evaluate(p, lo)), std::abs(evaluate(p, hi)));
    const RealPoly d = derivative(p);
    int deg = static_cast<int>(d.size()) - 1;
    while (deg >= 0 && d[static_cast<std::size_t>(deg)] == 0.0) --deg;
    if (deg >= 1) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i)
            comp(i, deg - 1) = -d[static_cast<std::size_t>(i)] / d[static_cast<std::size_t>(deg)];
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
        for (int i = 0; i < deg; ++i) {
            const auto z = es.eigenvalues()[i];
            if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real()))) continue;
            const double x = z.real();
            if (x >= lo && x <= hi) best = std::max(best, std::abs(evaluate(p, x)));
        }
    }
    return best;
}

}  // namespace wieler
