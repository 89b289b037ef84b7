#pragma once
// Substitution rules: parsing, primitivity, Perron-Frobenius data, fixed
// points, languages, word frequencies and the subshift metric.

#include "wieler/exact.hpp"
#include "wieler/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wieler {

/// Letters are indices into the alphabet.
using Word = std::vector<int>;

enum class ErrorKind { Syntax, EmptyImage, DuplicateSymbol, UndeclaredSymbol, NotPrimitive, NotExpanding, CollarFailure, Infeasible, DepthFailure, InvalidArgument };

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Syntax: return "syntax";
        case ErrorKind::EmptyImage: return "empty_image";
        case ErrorKind::DuplicateSymbol: return "duplicate_symbol";
        case ErrorKind::UndeclaredSymbol: return "undeclared_symbol";
        case ErrorKind::NotPrimitive: return "not_primitive";
        case ErrorKind::NotExpanding: return "not_expanding";
        case ErrorKind::CollarFailure: return "collar_failure";
        case ErrorKind::Infeasible: return "infeasible";
        case ErrorKind::DepthFailure: return "depth_failure";
        case ErrorKind::InvalidArgument: return "invalid_argument";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(what), kind_(kind), line_(line), column_(column) {}
    [[nodiscard]] ErrorKind kind() const { return kind_; }
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

private:
    ErrorKind kind_;
    int line_, column_;
};

struct SubstitutionRule {
    std::vector<std::string> alphabet;
    std::vector<Word> images;

    [[nodiscard]] std::size_t size() const { return alphabet.size(); }

    [[nodiscard]] Word apply(const Word& w) const {
        Word out;
        for (int a : w) out.insert(out.end(), images[static_cast<std::size_t>(a)].begin(), images[static_cast<std::size_t>(a)].end());
        return out;
    }

    [[nodiscard]] Word iterate(Word w, unsigned n) const {
        for (unsigned i = 0; i < n; ++i) w = apply(w);
        return w;
    }

    /// M(i, j) = number of occurrences of letter i in the image of letter j.
    [[nodiscard]] IntMatrix matrix() const {
        IntMatrix m(size(), size());
        for (std::size_t j = 0; j < size(); ++j)
            for (int i : images[j]) m(static_cast<std::size_t>(i), j) += 1;
        return m;
    }

    [[nodiscard]] SubstitutionRule power(unsigned p) const {
        SubstitutionRule r = *this;
        for (std::size_t a = 0; a < size(); ++a) r.images[a] = iterate(Word{static_cast<int>(a)}, p);
        return r;
    }

    [[nodiscard]] std::size_t max_image_length() const {
        std::size_t m = 0;
        for (const auto& w : images) m = std::max(m, w.size());
        return m;
    }

    [[nodiscard]] std::string spell(const Word& w, const std::string& sep = "") const {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i && !sep.empty()) s += sep;
            s += alphabet[static_cast<std::size_t>(w[i])];
        }
        return s;
    }

    [[nodiscard]] std::optional<int> letter(const std::string& name) const {
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == name) return static_cast<int>(i);
        return std::nullopt;
    }

    /// Inverse of spell() for single-character letter names.
    [[nodiscard]] Word read_word(const std::string& s) const {
        Word w;
        for (char c : s) {
            auto l = letter(std::string(1, c));
            if (!l) throw Error(ErrorKind::UndeclaredSymbol, std::string("unknown symbol '") + c + "'");
            w.push_back(*l);
        }
        return w;
    }

    [[nodiscard]] std::string to_text() const {
        std::string s;
        for (std::size_t a = 0; a < size(); ++a) s += alphabet[a] + " -> " + spell(images[a]) + "\n";
        return s;
    }
};

/// Parse `symbol -> word` entries separated by newlines or ';'. Symbols are
/// single non-space characters; '#' starts a comment.
inline SubstitutionRule parse_rule(const std::string& text) {
    struct Entry {
        char lhs;
        std::string rhs;
        int line, col, rhs_col;
    };
    std::vector<Entry> entries;
    int line = 1;
    std::size_t pos = 0;
    std::size_t line_start = 0;
    while (pos <= text.size()) {
        std::size_t end = pos;
        while (end < text.size() && text[end] != '\n' && text[end] != ';') ++end;
        std::string stmt = text.substr(pos, end - pos);
        const int base_col = static_cast<int>(pos - line_start) + 1;
        if (auto h = stmt.find('#'); h != std::string::npos) stmt.erase(h);
        const auto first = stmt.find_first_not_of(" \t\r");
        if (first != std::string::npos) {
            const auto arrow = stmt.find("->");
            if (arrow == std::string::npos)
                throw Error(ErrorKind::Syntax, "expected 'symbol -> word'", line, base_col + static_cast<int>(first));
            std::string lhs = stmt.substr(0, arrow);
            const auto l0 = lhs.find_first_not_of(" \t\r");
            const auto l1 = lhs.find_last_not_of(" \t\r");
            if (l0 == std::string::npos)
                throw Error(ErrorKind::Syntax, "missing symbol before '->'", line, base_col + static_cast<int>(arrow));
            if (l1 != l0)
                throw Error(ErrorKind::Syntax, "symbol must be a single character", line, base_col + static_cast<int>(l0));
            std::string rhs;
            int rhs_col = base_col + static_cast<int>(arrow) + 2;
            bool seen = false;
            for (std::size_t i = arrow + 2; i < stmt.size(); ++i) {
                const char c = stmt[i];
                if (c == ' ' || c == '\t' || c == '\r') continue;
                if (!seen) rhs_col = base_col + static_cast<int>(i);
                seen = true;
                if (c == '-' || c == '>')
                    throw Error(ErrorKind::Syntax, "unexpected character in image", line, base_col + static_cast<int>(i));
                rhs.push_back(c);
            }
            entries.push_back({lhs[l0], rhs, line, base_col + static_cast<int>(l0), rhs_col});
        }
        if (end >= text.size()) break;
        if (text[end] == '\n') {
            ++line;
            line_start = end + 1;
        }
        pos = end + 1;
    }
    if (entries.empty()) throw Error(ErrorKind::Syntax, "no rules found", 1, 1);

    SubstitutionRule rule;
    for (const auto& e : entries) {
        const std::string name(1, e.lhs);
        if (rule.letter(name))
            throw Error(ErrorKind::DuplicateSymbol, "duplicate left-hand symbol '" + name + "'", e.line, e.col);
        rule.alphabet.push_back(name);
    }
    for (const auto& e : entries) {
        if (e.rhs.empty())
            throw Error(ErrorKind::EmptyImage, "empty image for '" + std::string(1, e.lhs) + "'", e.line, e.rhs_col);
        Word w;
        int col = e.rhs_col;
        for (char c : e.rhs) {
            auto l = rule.letter(std::string(1, c));
            if (!l) throw Error(ErrorKind::UndeclaredSymbol, std::string("undeclared symbol '") + c + "'", e.line, col);
            w.push_back(*l);
            ++col;
        }
        rule.images.push_back(std::move(w));
    }
    return rule;
}

struct Primitivity {
    unsigned K = 0;          // smallest K with M^K > 0
    unsigned power = 1;      // rule is replaced by its power-th iterate
    int seed = 0;            // letter a with rho^power(a) starting with a
};

inline bool strictly_positive(const IntMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) <= 0) return false;
    return true;
}

inline Primitivity primitivity_check(const SubstitutionRule& rule) {
    const std::size_t n = rule.size();
    const unsigned bound = static_cast<unsigned>(2 * n * n);
    IntMatrix m = rule.matrix();
    IntMatrix pattern(n, n);  // 0/1 pattern of M^k keeps entries small
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pattern(i, j) = m(i, j) > 0 ? 1 : 0;
    IntMatrix pk = pattern;
    Primitivity out;
    for (unsigned k = 1;; ++k) {
        if (strictly_positive(pk)) {
            out.K = k;
            break;
        }
        if (k >= bound) {
            std::ostringstream os;
            os << "not primitive: M^" << bound << " has zero pattern";
            for (std::size_t i = 0; i < n; ++i) {
                os << (i ? " / " : " ");
                for (std::size_t j = 0; j < n; ++j) os << (pk(i, j) > 0 ? '+' : '0');
            }
            throw Error(ErrorKind::NotPrimitive, os.str());
        }
        pk = pk * pattern;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) pk(i, j) = pk(i, j) > 0 ? 1 : 0;
    }
    // Letter a with rho^p(a) starting with a: follow first letters a -> first(rho(a)).
    for (unsigned p = 1; p <= n; ++p) {
        for (std::size_t a = 0; a < n; ++a) {
            int b = static_cast<int>(a);
            for (unsigned i = 0; i < p; ++i) b = rule.images[static_cast<std::size_t>(b)].front();
            if (b == static_cast<int>(a)) {
                out.power = p;
                out.seed = static_cast<int>(a);
                goto found;
            }
        }
    }
found:
    // a primitive rule whose images all have length one is a permutation
    bool grows = false;
    for (const auto& w : rule.images) grows = grows || w.size() > 1;
    if (!grows) throw Error(ErrorKind::NotExpanding, "substitution does not expand (lambda = 1)");
    return out;
}

struct PerronData {
    IntMatrix matrix;
    double lambda = 0;
    std::vector<double> left_vec;   // M^T v = lambda v: edge lengths, sum rho_l v_l = 1
    std::vector<double> right_vec;  // M rho = lambda rho: letter frequencies, sum 1
    double h_top = 0;
    double lambda0 = 0;
    double chi_minus = 0;
    double Lambda = 1;

    [[nodiscard]] const std::vector<double>& lengths() const { return left_vec; }
    [[nodiscard]] const std::vector<double>& frequencies() const { return right_vec; }
};

/// Dominant real root of a monic integer polynomial, polished to full
/// double precision by bisection on a bracket followed by Newton steps.
inline double dominant_root(const IntPoly& p, double estimate) {
    auto f = [&](long double x) {
        long double y = 0;
        for (std::size_t i = p.size(); i > 0; --i) y = y * x + static_cast<long double>(to_double(p[i - 1]));
        return y;
    };
    auto df = [&](long double x) {
        long double y = 0;
        for (std::size_t i = p.size(); i > 1; --i) y = y * x + static_cast<long double>(to_double(p[i - 1])) * static_cast<long double>(i - 1);
        return y;
    };
    long double lo = estimate - 1e-6L * std::max(1.0, estimate);
    long double hi = estimate + 1e-6L * std::max(1.0, estimate);
    if (f(lo) * f(hi) > 0) return estimate;
    for (int i = 0; i < 200 && hi - lo > 1e-15L * hi; ++i) {
        const long double mid = (lo + hi) / 2;
        if ((f(lo) < 0) == (f(mid) < 0)) lo = mid;
        else hi = mid;
    }
    long double x = (lo + hi) / 2;
    for (int i = 0; i < 5; ++i) {
        const long double d = df(x);
        if (d == 0) break;
        x -= f(x) / d;
    }
    return static_cast<double>(x);
}

/// Positive eigenvector of a nonnegative matrix for eigenvalue lambda,
/// from the null space of (A - lambda I).
inline std::vector<double> positive_eigenvector(const Eigen::MatrixXd& a, double lambda) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd b = a - lambda * Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(n - 1);
    // a few inverse-iteration refinements
    Eigen::MatrixXd shifted = a - (lambda * (1.0 + 1e-13)) * Eigen::MatrixXd::Identity(n, n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
    for (int it = 0; it < 3; ++it) {
        Eigen::VectorXd w = lu.solve(v);
        if (!w.allFinite() || w.norm() == 0) break;
        v = w / w.norm();
    }
    if (v.sum() < 0) v = -v;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::max(0.0, v(i));
    return out;
}

inline Eigen::MatrixXd to_eigen(const IntMatrix& m) {
    Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    return e;
}

inline Eigen::MatrixXd to_eigen(const RatMatrix& m) {
    Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    return e;
}

inline double spectral_radius_estimate(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    double best = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) < 1e-8 && z.real() > best) best = z.real();
    }
    return best;
}

inline PerronData perron_data(const SubstitutionRule& rule) {
    PerronData pd;
    pd.matrix = rule.matrix();
    const Eigen::MatrixXd m = to_eigen(pd.matrix);
    const double est = spectral_radius_estimate(m);
    pd.lambda = dominant_root(characteristic_polynomial(pd.matrix), est);
    if (!(pd.lambda > 1.0)) throw Error(ErrorKind::NotExpanding, "Perron-Frobenius eigenvalue is not > 1");
    pd.right_vec = positive_eigenvector(m, pd.lambda);
    pd.left_vec = positive_eigenvector(m.transpose(), pd.lambda);
    double s = 0;
    for (double x : pd.right_vec) s += x;
    for (double& x : pd.right_vec) x /= s;
    double dot = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) dot += pd.right_vec[i] * pd.left_vec[i];
    for (double& x : pd.left_vec) x /= dot;
    for (std::size_t i = 0; i < rule.size(); ++i)
        if (!(pd.right_vec[i] > 0) || !(pd.left_vec[i] > 0))
            throw std::logic_error("Perron-Frobenius eigenvector is not positive");
    pd.h_top = std::log(pd.lambda);
    pd.lambda0 = pd.lambda;
    pd.chi_minus = std::log(pd.lambda0);
    pd.Lambda = pd.h_top / pd.chi_minus;
    return pd;
}

/// First n letters of the fixed point starting with `seed`; requires
/// rho(seed) to start with seed.
inline Word fixed_point_prefix(const SubstitutionRule& rule, std::size_t n, int seed = -1) {
    if (seed < 0) {
        for (std::size_t a = 0; a < rule.size(); ++a)
            if (rule.images[a].front() == static_cast<int>(a) && rule.images[a].size() > 1) {
                seed = static_cast<int>(a);
                break;
            }
        if (seed < 0) throw Error(ErrorKind::InvalidArgument, "no letter a with rho(a) = a...; pass to a power first");
    }
    const auto& img = rule.images[static_cast<std::size_t>(seed)];
    if (img.front() != seed) throw Error(ErrorKind::InvalidArgument, "seed image does not start with the seed");
    Word w{seed};
    // rho(seed) may have length one only if the rule does not grow from seed
    if (img.size() == 1) throw Error(ErrorKind::InvalidArgument, "seed image has length one");
    while (w.size() < n) {
        Word next;
        next.reserve(std::min<std::size_t>(n, w.size() * rule.max_image_length()) + rule.max_image_length());
        for (int a : w) {
            const auto& im = rule.images[static_cast<std::size_t>(a)];
            next.insert(next.end(), im.begin(), im.end());
            if (next.size() >= n) break;
        }
        w = std::move(next);
    }
    w.resize(n);
    return w;
}

/// Working rule used by every downstream computation: the smallest power
/// having a letter whose image starts with itself.
struct PreparedRule {
    SubstitutionRule original;
    SubstitutionRule rule;
    Primitivity primitivity;
};

inline PreparedRule prepare(const SubstitutionRule& rule) {
    PreparedRule p;
    p.original = rule;
    p.primitivity = primitivity_check(rule);
    p.rule = p.primitivity.power == 1 ? rule : rule.power(p.primitivity.power);
    // prefer a seed whose image has length > 1
    for (std::size_t a = 0; a < p.rule.size(); ++a)
        if (p.rule.images[a].front() == static_cast<int>(a) && p.rule.images[a].size() > 1) {
            p.primitivity.seed = static_cast<int>(a);
            break;
        }
    return p;
}

/// All legal words of length n: closure of the n-windows of a long
/// iterate of `seed` under "n-windows of rho(w)".
inline std::vector<Word> language(const SubstitutionRule& rule, std::size_t n, int seed = 0) {
    if (n == 0) return {Word{}};
    Word start{seed};
    while (start.size() < n) {
        Word next = rule.apply(start);
        if (next.size() == start.size() && next == start)
            throw Error(ErrorKind::InvalidArgument, "iterates of the seed do not grow");
        start = std::move(next);
    }
    std::set<Word> seen;
    std::vector<Word> queue;
    auto add_windows = [&](const Word& w) {
        for (std::size_t i = 0; i + n <= w.size(); ++i) {
            Word sub(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i + n));
            if (seen.insert(sub).second) queue.push_back(std::move(sub));
        }
    };
    add_windows(start);
    while (!queue.empty()) {
        Word w = std::move(queue.back());
        queue.pop_back();
        add_windows(rule.apply(w));
    }
    return {seen.begin(), seen.end()};
}

struct InvariantMeasure {
    std::size_t max_word_length = 0;
    std::map<Word, double> frequencies;

    [[nodiscard]] double operator()(const Word& w) const {
        if (w.empty()) return 1.0;
        if (w.size() > max_word_length) throw Error(ErrorKind::InvalidArgument, "word longer than the measure's range");
        auto it = frequencies.find(w);
        return it == frequencies.end() ? 0.0 : it->second;
    }

    [[nodiscard]] std::vector<Word> words(std::size_t len) const {
        std::vector<Word> out;
        for (const auto& [w, f] : frequencies)
            if (w.size() == len) out.push_back(w);
        return out;
    }
};

/// Exact frequencies: the Perron-Frobenius eigenvector of the induced
/// substitution on legal L-words. Shorter words are obtained by summing
/// right extensions.
inline InvariantMeasure invariant_measure(const SubstitutionRule& rule, std::size_t L, int seed = 0) {
    if (L == 0) throw Error(ErrorKind::InvalidArgument, "max word length must be positive");
    const auto words = language(rule, L, seed);
    std::map<Word, std::size_t> index;
    for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = i;
    const auto n = static_cast<Eigen::Index>(words.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < words.size(); ++j) {
        const Word img = rule.apply(words[j]);
        const std::size_t first = rule.images[static_cast<std::size_t>(words[j][0])].size();
        for (std::size_t p = 0; p < first; ++p) {
            Word sub(img.begin() + static_cast<long>(p), img.begin() + static_cast<long>(p + L));
            m(static_cast<Eigen::Index>(index.at(sub)), static_cast<Eigen::Index>(j)) += 1.0;
        }
    }
    const double lambda = dominant_root(characteristic_polynomial(rule.matrix()), spectral_radius_estimate(to_eigen(rule.matrix())));
    auto v = positive_eigenvector(m, lambda);
    double s = 0;
    for (double x : v) s += x;
    InvariantMeasure mu;
    mu.max_word_length = L;
    for (std::size_t i = 0; i < words.size(); ++i) mu.frequencies[words[i]] = v[i] / s;
    for (std::size_t len = L - 1; len >= 1; --len) {
        std::map<Word, double> shorter;
        for (const auto& [w, f] : mu.frequencies)
            if (w.size() == len + 1) shorter[Word(w.begin(), w.end() - 1)] += f;
        for (auto& [w, f] : shorter) mu.frequencies[w] = f;
    }
    return mu;
}

/// Empirical frequencies from a fixed-point prefix of length N.
inline InvariantMeasure cylinder_frequencies(const SubstitutionRule& rule, std::size_t L, std::size_t N, double lambda, int seed = -1) {
    const double needed = 100.0 * std::pow(lambda, static_cast<double>(L));
    if (static_cast<double>(N) < needed) {
        std::ostringstream os;
        os << "sample length " << N << " too small for words of length " << L << "; need N >= " << static_cast<std::size_t>(std::ceil(needed));
        throw Error(ErrorKind::Infeasible, os.str());
    }
    const Word x = fixed_point_prefix(rule, N + L, seed);
    InvariantMeasure mu;
    mu.max_word_length = L;
    for (std::size_t len = 1; len <= L; ++len) {
        std::map<Word, double> counts;
        for (std::size_t i = 0; i < N; ++i) counts[Word(x.begin() + static_cast<long>(i), x.begin() + static_cast<long>(i + len))] += 1.0;
        for (auto& [w, c] : counts) mu.frequencies[w] = c / static_cast<double>(N);
    }
    return mu;
}

/// lambda^{-k} for the first disagreement index k (0-based). Returns 0 when
/// the prefixes agree on their overlap and `declared_equal` is set.
inline double subshift_distance(const Word& x, const Word& y, double lambda, bool declared_equal = false) {
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t k = 0; k < n; ++k)
        if (x[k] != y[k]) return std::pow(lambda, -static_cast<double>(k));
    if (declared_equal) return 0.0;
    throw Error(ErrorKind::DepthFailure, "undecidable at this depth: prefixes agree on their full overlap");
}

/// Heuristic aperiodicity check: the fixed-point prefix has no period <= N/4.
inline bool looks_aperiodic(const SubstitutionRule& rule, std::size_t N, int seed = -1) {
    const Word x = fixed_point_prefix(rule, N, seed);
    for (std::size_t p = 1; p <= N / 4; ++p) {
        bool periodic = true;
        for (std::size_t i = p; i < N && periodic; ++i) periodic = x[i] == x[i - p];
        if (periodic) return false;
    }
    return true;
}

struct SupertileMass {
    int level;
    int letter;       // type of the level-k supertile
    std::size_t offset;
    double measured;  // empirical frequency on the fixed point prefix
    double exact;     // rho_letter * lambda^{-k}
};

/// Masses of the level-k supertile cylinders (supertile type, offset)
/// measured on a fixed-point prefix of length N, using x = rho^k(x).
inline std::vector<SupertileMass> supertile_masses(const SubstitutionRule& rule, const PerronData& pd, int k, std::size_t N, int seed = -1) {
    const Word x = fixed_point_prefix(rule, N, seed);
    std::size_t blocks = 0, covered = 0;
    std::vector<std::size_t> block_len(rule.size());
    for (std::size_t a = 0; a < rule.size(); ++a)
        block_len[a] = rule.iterate(Word{static_cast<int>(a)}, static_cast<unsigned>(k)).size();
    std::map<std::pair<int, std::size_t>, double> counts;
    while (covered < N) {
        const int t = x[blocks];
        const std::size_t len = block_len[static_cast<std::size_t>(t)];
        for (std::size_t j = 0; j < len && covered + j < N; ++j) counts[{t, j}] += 1.0;
        covered += len;
        ++blocks;
    }
    std::vector<SupertileMass> out;
    for (auto& [key, c] : counts)
        out.push_back({k, key.first, key.second, c / static_cast<double>(N),
                       pd.right_vec[static_cast<std::size_t>(key.first)] * std::pow(pd.lambda, -k)});
    return out;
}

}  // namespace wieler
