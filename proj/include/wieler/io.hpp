#pragma once
// File formats and JSON views of the library's results.

#include "wieler/analysis.hpp"
#include "wieler/coboundary.hpp"
#include "wieler/deviation.hpp"
#include "wieler/resonance_fit.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace wieler {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    out << text;
}

/// `word,value` per line; '#' comments and a `word,value` header are
/// allowed. All words must be legal and share one length; missing legal
/// words take the value 0.
inline CylinderFunction parse_function_csv(const std::string& text, const SubstitutionRule& rule, const InvariantMeasure& mu) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<Word, double> given;
    std::size_t len = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorKind::Syntax, "expected word,value", lineno, 1);
        const std::string ws = trim(line.substr(0, comma)), vs = trim(line.substr(comma + 1));
        if (ws == "word" && given.empty()) continue;
        Word w;
        try {
            w = rule.read_word(ws);
        } catch (const Error& e) {
            throw Error(ErrorKind::Syntax, e.what(), lineno, 1);
        }
        if (w.empty()) throw Error(ErrorKind::Syntax, "empty word", lineno, 1);
        if (len == 0) len = w.size();
        if (w.size() != len) throw Error(ErrorKind::Syntax, "all words must have the same length", lineno, 1);
        double v = 0;
        std::size_t used = 0;
        try {
            v = std::stod(vs, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != vs.size()) throw Error(ErrorKind::Syntax, "bad value '" + vs + "'", lineno, static_cast<int>(comma + 2));
        if (!given.emplace(w, v).second) throw Error(ErrorKind::Syntax, "duplicate word " + ws, lineno, 1);
    }
    if (given.empty()) throw Error(ErrorKind::Syntax, "function file has no entries");
    require_measure(mu, len);
    const auto legal = mu.words(len);
    const std::set<Word> legal_set(legal.begin(), legal.end());
    for (const auto& [w, v] : given)
        if (!legal_set.count(w)) throw Error(ErrorKind::Syntax, "word " + rule.spell(w) + " is not legal");
    return make_function(mu, len - 1, [&](const Word& w) {
        auto it = given.find(w);
        return it == given.end() ? 0.0 : it->second;
    });
}

inline std::string function_to_csv(const CylinderFunction& f, const SubstitutionRule& rule) {
    std::ostringstream out;
    out.precision(17);
    out << "word,value\n";
    for (const auto& [w, v] : f.values) out << rule.spell(w) << "," << v << "\n";
    return out.str();
}

inline json to_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

inline json to_json(const std::vector<Complex>& zs) {
    json a = json::array();
    for (const auto& z : zs) a.push_back(to_json(z));
    return a;
}

inline json to_json(const IntMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).convert_to<long long>());
        a.push_back(row);
    }
    return a;
}

inline json to_json(const RatMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(boost::lexical_cast<std::string>(m(i, j)));
        a.push_back(row);
    }
    return a;
}

inline json to_json(const PerronData& pd) {
    return json{{"matrix", to_json(pd.matrix)}, {"lambda", pd.lambda}, {"lengths", pd.left_vec}, {"frequencies", pd.right_vec},
                {"h_top", pd.h_top}, {"lambda0", pd.lambda0}, {"chi_minus", pd.chi_minus}};
}

inline json to_json(const std::vector<Eigenvalue>& eigs) {
    json a = json::array();
    for (const auto& e : eigs) {
        json j = to_json(e.value);
        j["multiplicity"] = e.multiplicity;
        j["jordan_blocks"] = e.blocks;
        RealPoly coeffs;
        for (const auto& c : e.factor) coeffs.push_back(to_double(c));
        j["minimal_factor"] = coeffs;
        a.push_back(j);
    }
    return a;
}

inline json to_json(const SpectralClassification& c) {
    return json{{"d", c.d},
                {"lambda", c.lambda},
                {"lambda0", c.lambda0},
                {"h_top", c.h_top},
                {"chi_minus", c.chi_minus},
                {"alpha_threshold", c.alpha_threshold()},
                {"eigenvalues", to_json(c.eigenvalues)},
                {"Sigma_plus", to_json(c.Sigma_plus)},
                {"Sigma_minus", to_json(c.Sigma_minus)},
                {"sigma_minus", to_json(c.sigma_minus)},
                {"E_plus", c.E_plus},
                {"E_plus_strict", c.E_plus_strict},
                {"E_plus_equal", c.E_plus_equal}};
}

inline json to_json(const RuellePrediction& p) {
    json ladder = json::array();
    for (const auto& r : p.ladder) {
        json j = to_json(r.value);
        j["k"] = r.k;
        j["r"] = r.r;
        j["alpha"] = r.alpha;
        ladder.push_back(j);
    }
    return json{{"base_set", to_json(p.base_set)}, {"ladder", ladder}, {"alpha_threshold", p.alpha_threshold}, {"pisot", p.pisot}};
}

inline json to_json(const DeviationExponentTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json j = to_json(r.value);
        j["eigen_index"] = r.eigen_index;
        j["j"] = r.j;
        j["exponent"] = r.exponent;
        j["log_power"] = r.log_power;
        j["equality"] = r.equality;
        rows.push_back(j);
    }
    return json{{"rows", rows}, {"boundary_exponent", t.boundary_exponent}};
}

inline json to_json(const CohomologyData& h) {
    json torsion = json::array();
    for (const auto& t : h.h1_torsion) torsion.push_back(t.convert_to<long long>());
    return json{{"H0_rank", h.h0_rank},
                {"H1_rank", h.h1_rank},
                {"H1_torsion", torsion},
                {"A", to_json(h.A)},
                {"A_eigenvalues", to_json(jordan_structure(h.A))},
                {"eventual_range_dim", h.er_dim()},
                {"A_eventual_range", to_json(h.A_ER)},
                {"stabilized", h.stabilized},
                {"abelianization_divides", h.abelianization_divides}};
}

inline json to_json(const ResonanceFit& f) {
    json amps = json::array();
    for (const auto& a : f.amplitudes) amps.push_back(json{{"re", a.real()}, {"im", a.imag()}});
    return json{{"rates", to_json(f.rates)}, {"amplitudes", amps}, {"residual", f.residual}, {"condition", f.condition},
                {"ill_conditioned", f.ill_conditioned}, {"window", {f.n_lo, f.n_hi}}, {"note", f.note}};
}

inline json to_json(const GrowthFit& g) {
    return json{{"slope", g.slope}, {"log_power", g.log_power}, {"constant", g.constant}, {"residual", g.residual}, {"with_log", g.with_log}};
}

inline json to_json(const DeviationReport& r) {
    json dirs = json::array();
    for (const auto& d : r.directions) {
        json j = to_json(d.eigenvalue);
        j["multiplicity"] = d.multiplicity;
        j["largest_block"] = d.largest_block;
        j["predicted_exponent"] = std::isfinite(d.predicted_exponent) ? json(d.predicted_exponent) : json(nullptr);
        j["weight"] = d.weight;
        j["fit"] = d.fit ? to_json(*d.fit) : json(nullptr);
        j["table_row"] = d.table_row ? json(*d.table_row) : json(nullptr);
        dirs.push_back(j);
    }
    return json{{"window", {r.window_lo, r.window_hi}},
                {"sup_by_level", r.sup_by_level},
                {"overall", r.overall ? to_json(*r.overall) : json(nullptr)},
                {"bounded", r.bounded},
                {"zero", r.zero},
                {"directions", dirs},
                {"note", r.note}};
}

inline json to_json(const ObstructionVector& o) {
    return json{{"K", o.K}, {"alpha", o.alpha}, {"coords", o.coords}, {"norm", o.norm}, {"increments", o.increments},
                {"base", o.base}, {"C", o.C}, {"convergent", o.convergent}};
}

inline json to_json(const GhScan& g) {
    return json{{"N", g.N}, {"sup", g.sup}, {"mean", g.mean}, {"power", g.power}, {"verdict", g.verdict}};
}

inline json to_json(const HolderCertificate& c) {
    return json{{"alpha", c.alpha}, {"seminorm", c.seminorm}, {"per_level", c.per_level_max}};
}

inline json error_json(const Error& e) {
    return json{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}, {"line", e.line()}, {"column", e.column()}}}};
}

}  // namespace wieler
