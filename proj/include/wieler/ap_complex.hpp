#pragma once
// Collared Anderson-Putnam complex of a substitution: edges are collared
// letters, vertices are classes of letter junctions, gamma is the cellular
// map induced by the substitution. Cohomology is computed exactly.

#include "wieler/exact.hpp"
#include "wieler/polynomial.hpp"
#include "wieler/substitution.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace wieler {

struct CollaredRule {
    SubstitutionRule rule;        // alphabet: collared letters, spelled as their words
    std::vector<Word> words;      // underlying legal (2d+1)-word of each collared letter
    int depth = 1;
    unsigned forcing_power = 0;   // border-forcing certificate
    std::vector<unsigned> forcing_per_letter;
    std::vector<std::pair<int, int>> transitions;  // legal adjacent pairs p q

    [[nodiscard]] int center(int l) const { return words[static_cast<std::size_t>(l)][static_cast<std::size_t>(depth)]; }
    [[nodiscard]] std::size_t size() const { return words.size(); }
};

namespace detail {

inline int first_letter_after(const SubstitutionRule& r, int l, unsigned n) {
    for (unsigned i = 0; i < n; ++i) l = r.images[static_cast<std::size_t>(l)].front();
    return l;
}

inline int last_letter_after(const SubstitutionRule& r, int l, unsigned n) {
    for (unsigned i = 0; i < n; ++i) l = r.images[static_cast<std::size_t>(l)].back();
    return l;
}

}  // namespace detail

/// Collar each letter with `depth` neighbours on each side.
inline CollaredRule collar_rule(const SubstitutionRule& rule, int depth = 1, int seed = 0) {
    if (depth < 1) throw Error(ErrorKind::InvalidArgument, "collar depth must be >= 1");
    const std::size_t width = static_cast<std::size_t>(2 * depth + 1);
    CollaredRule c;
    c.depth = depth;
    c.words = language(rule, width, seed);
    std::map<Word, int> index;
    for (std::size_t i = 0; i < c.words.size(); ++i) {
        index[c.words[i]] = static_cast<int>(i);
        c.rule.alphabet.push_back(rule.spell(c.words[i]));
    }
    for (const auto& w : c.words) {
        Word img;
        std::size_t start = 0;
        for (std::size_t i = 0; i < width; ++i) {
            if (i == static_cast<std::size_t>(depth)) start = img.size();
            const auto& part = rule.images[static_cast<std::size_t>(w[i])];
            img.insert(img.end(), part.begin(), part.end());
        }
        const std::size_t len = rule.images[static_cast<std::size_t>(w[static_cast<std::size_t>(depth)])].size();
        Word out;
        for (std::size_t p = start; p < start + len; ++p) {
            Word win(img.begin() + static_cast<long>(p) - depth, img.begin() + static_cast<long>(p) + depth + 1);
            auto it = index.find(win);
            if (it == index.end())
                throw Error(ErrorKind::CollarFailure, "collared image contains an illegal word " + rule.spell(win));
            out.push_back(it->second);
        }
        c.rule.images.push_back(std::move(out));
    }

    // neighbours from legal (2d+2)-words
    const auto pairs = language(rule, width + 1, seed);
    std::vector<std::set<int>> right(c.size()), left(c.size());
    for (const auto& w : pairs) {
        const int p = index.at(Word(w.begin(), w.end() - 1));
        const int q = index.at(Word(w.begin() + 1, w.end()));
        right[static_cast<std::size_t>(p)].insert(q);
        left[static_cast<std::size_t>(q)].insert(p);
        c.transitions.emplace_back(p, q);
    }
    const unsigned bound = static_cast<unsigned>(4 * c.size() + 4);
    c.forcing_per_letter.assign(c.size(), 0);
    for (std::size_t l = 0; l < c.size(); ++l) {
        unsigned n = 1;
        for (;; ++n) {
            if (n > bound)
                throw Error(ErrorKind::CollarFailure,
                            "collared rule does not force the border at depth " + std::to_string(depth) +
                                "; retry with depth " + std::to_string(depth + 1));
            std::set<int> firsts, lasts;
            for (int r : right[l]) firsts.insert(detail::first_letter_after(c.rule, r, n));
            for (int q : left[l]) lasts.insert(detail::last_letter_after(c.rule, q, n));
            if (firsts.size() <= 1 && lasts.size() <= 1) break;
        }
        c.forcing_per_letter[l] = n;
        c.forcing_power = std::max(c.forcing_power, n);
    }
    return c;
}

struct Edge {
    int base_letter = 0;
    double length = 0;
    int source = 0, target = 0;
    std::vector<int> path;  // gamma(e) as a sequence of edges
};

struct APComplex {
    CollaredRule collared;
    std::vector<Edge> edges;
    std::size_t num_vertices = 0;
    std::vector<std::string> vertex_labels;
    std::vector<int> gamma_vertex;
    std::vector<double> density;  // invariant measure density per unit length on each edge
    double lambda = 0;

    [[nodiscard]] std::size_t num_edges() const { return edges.size(); }
    [[nodiscard]] long euler_characteristic() const {
        return static_cast<long>(num_vertices) - static_cast<long>(edges.size());
    }
};

inline APComplex build_ap_complex(const CollaredRule& c, const PerronData& pd) {
    APComplex cx;
    cx.collared = c;
    cx.lambda = pd.lambda;
    const std::size_t E = c.size();

    // union-find on endpoints: start(e) = 2e, end(e) = 2e + 1
    std::vector<std::size_t> parent(2 * E);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [p, q] : c.transitions)
        parent[find(2 * static_cast<std::size_t>(p) + 1)] = find(2 * static_cast<std::size_t>(q));
    std::map<std::size_t, int> vid;
    auto vertex_of = [&](std::size_t node) {
        const std::size_t root = find(node);
        auto [it, inserted] = vid.try_emplace(root, static_cast<int>(vid.size()));
        if (inserted) cx.vertex_labels.emplace_back();
        return it->second;
    };
    cx.edges.resize(E);
    for (std::size_t e = 0; e < E; ++e) {
        auto& edge = cx.edges[e];
        edge.base_letter = c.center(static_cast<int>(e));
        edge.length = pd.left_vec[static_cast<std::size_t>(edge.base_letter)];
        edge.source = vertex_of(2 * e);
        edge.target = vertex_of(2 * e + 1);
        edge.path = c.rule.images[e];
    }
    cx.num_vertices = vid.size();
    // vertex labels: the junction word (last 2d letters of an incoming edge)
    std::vector<bool> labelled(cx.num_vertices, false);
    for (std::size_t e = 0; e < E; ++e) {
        const int v = cx.edges[e].target;
        if (labelled[static_cast<std::size_t>(v)]) continue;
        const std::string& name = c.rule.alphabet[e];
        cx.vertex_labels[static_cast<std::size_t>(v)] = name.substr(1);
        labelled[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t e = 0; e < E; ++e) {
        const int v = cx.edges[e].source;
        if (labelled[static_cast<std::size_t>(v)]) continue;
        const std::string& name = c.rule.alphabet[e];
        cx.vertex_labels[static_cast<std::size_t>(v)] = name.substr(0, name.size() - 1);
        labelled[static_cast<std::size_t>(v)] = true;
    }

    // gamma on vertices, checked for consistency
    cx.gamma_vertex.assign(cx.num_vertices, -1);
    auto assign = [&](int v, int image) {
        auto& slot = cx.gamma_vertex[static_cast<std::size_t>(v)];
        if (slot >= 0 && slot != image)
            throw Error(ErrorKind::CollarFailure, "inconsistent vertex identification under gamma");
        slot = image;
    };
    for (const auto& edge : cx.edges) {
        for (std::size_t i = 0; i + 1 < edge.path.size(); ++i)
            if (cx.edges[static_cast<std::size_t>(edge.path[i])].target != cx.edges[static_cast<std::size_t>(edge.path[i + 1])].source)
                throw Error(ErrorKind::CollarFailure, "gamma image path is not connected");
        assign(edge.source, cx.edges[static_cast<std::size_t>(edge.path.front())].source);
        assign(edge.target, cx.edges[static_cast<std::size_t>(edge.path.back())].target);
    }

    // invariant density: frequencies of collared letters, so that sum density * length = 1
    const Eigen::MatrixXd mc = to_eigen(c.rule.matrix());
    auto v = positive_eigenvector(mc, pd.lambda);
    double s = 0;
    for (double x : v) s += x;
    cx.density.assign(E, 0.0);
    for (std::size_t e = 0; e < E; ++e) cx.density[e] = v[e] / s;
    return cx;
}

struct CochainMaps {
    IntMatrix D;   // E x V coboundary
    IntMatrix G0;  // gamma* on C^0
    IntMatrix G1;  // gamma* on C^1: G1(e, e') = occurrences of e' in gamma(e)
};

inline CochainMaps induced_cochain_maps(const APComplex& cx) {
    const std::size_t E = cx.num_edges(), V = cx.num_vertices;
    CochainMaps m{IntMatrix(E, V), IntMatrix(V, V), IntMatrix(E, E)};
    for (std::size_t e = 0; e < E; ++e) {
        m.D(e, static_cast<std::size_t>(cx.edges[e].target)) += 1;
        m.D(e, static_cast<std::size_t>(cx.edges[e].source)) -= 1;
        for (int f : cx.edges[e].path) m.G1(e, static_cast<std::size_t>(f)) += 1;
    }
    for (std::size_t v = 0; v < V; ++v) m.G0(v, static_cast<std::size_t>(cx.gamma_vertex[v])) = 1;
    if (!(m.D * m.G0 == m.G1 * m.D)) throw std::logic_error("induced cochain maps do not commute with the coboundary");
    return m;
}

struct CohomologyData {
    CochainMaps maps;
    SmithForm snf;
    std::size_t h0_rank = 0;
    std::size_t h1_rank = 0;
    std::vector<Integer> h1_torsion;
    IntMatrix A;            // gamma* on the free part of H^1
    RatMatrix h1_coords;    // (E - r) x E: cochain -> H^1 free coordinates
    RatMatrix ER_basis;     // columns span the eventual range A^beta H^1
    RatMatrix A_ER;         // A restricted to the eventual range
    bool stabilized = false;
    bool abelianization_divides = false;

    [[nodiscard]] std::size_t er_dim() const { return ER_basis.cols(); }

    /// H^1 coordinates of a real cochain.
    [[nodiscard]] std::vector<double> h1_of(const std::vector<double>& cochain) const {
        std::vector<double> out(h1_coords.rows(), 0.0);
        for (std::size_t i = 0; i < h1_coords.rows(); ++i)
            for (std::size_t j = 0; j < h1_coords.cols(); ++j) out[i] += to_double(h1_coords(i, j)) * cochain[j];
        return out;
    }
};

inline CohomologyData cohomology_direct_limit(const APComplex& cx, const IntMatrix* abelianization = nullptr) {
    CohomologyData h;
    h.maps = induced_cochain_maps(cx);
    h.snf = smith_normal_form(h.maps.D);
    const std::size_t E = cx.num_edges(), V = cx.num_vertices, r = h.snf.rank;
    h.h0_rank = V - r;
    h.h1_rank = E - r;
    for (const auto& s : h.snf.diagonal)
        if (s > 1) h.h1_torsion.push_back(s);

    const IntMatrix B = h.snf.P * h.maps.G1 * h.snf.P_inv;
    for (std::size_t i = r; i < E; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (B(i, j) != 0) throw std::logic_error("gamma* does not preserve the coboundaries");
    h.A = B.block(r, r, E - r, E - r);
    h.h1_coords = h.snf.P.block(r, 0, E - r, E).cast<Rational>();

    const std::size_t beta = h.h1_rank;
    const RatMatrix Aq = h.A.cast<Rational>();
    const RatMatrix Ab = Aq.pow(static_cast<unsigned>(beta));
    h.stabilized = rank(Ab) == rank(RatMatrix(Ab * Aq));
    h.ER_basis = column_space_basis(Ab);
    if (h.ER_basis.cols() > 0) {
        h.A_ER = solve_full_column_rank(h.ER_basis, Aq * h.ER_basis);
        if (rank(h.A_ER) != h.A_ER.rows()) throw std::logic_error("A restricted to the eventual range is singular");
    }
    if (abelianization) {
        const RatPoly pm = to_rational(characteristic_polynomial(*abelianization));
        const RatPoly pa = to_rational(characteristic_polynomial(h.A));
        h.abelianization_divides = poly_divmod(pa, pm).second.empty();
    }
    return h;
}

}  // namespace wieler
