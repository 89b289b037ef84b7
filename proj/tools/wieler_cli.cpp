// Command-line front end: analyze, correlations, deviations, coboundary.

#include <wieler/wieler.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

using namespace wieler;

namespace {

struct Config {
    std::string command;
    std::string rule;
    std::string out = ".";
    std::string f = "random";
    std::string g = "random";
    std::string function;
    int nmax = -1;
    int depth = -1;
    double alpha = 3.0;
    int r = 1;
    int kmax = 2;
    int quad_order = 24;
    double epsilon = 0;
    int rates = 2;
    double max_panels = 2e8;
    double tolerance = 1e-6;
    std::size_t scan = 1000000;
    int truncation = 12;
    bool weighted = false;
    bool override_obstruction = false;
    unsigned seed = 1;

    [[nodiscard]] json to_json() const {
        return json{{"command", command}, {"rule", rule},   {"out", out},         {"f", f},           {"g", g},
                    {"function", function}, {"nmax", nmax}, {"depth", depth},     {"alpha", alpha},   {"r", r},
                    {"kmax", kmax},         {"quad_order", quad_order}, {"epsilon", epsilon}, {"rates", rates},
                    {"max_panels", max_panels}, {"tolerance", tolerance}, {"scan", scan}, {"truncation", truncation},
                    {"weighted", weighted}, {"override", override_obstruction}, {"seed", seed}};
    }
};

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Syntax:
        case ErrorKind::EmptyImage:
        case ErrorKind::DuplicateSymbol:
        case ErrorKind::UndeclaredSymbol:
        case ErrorKind::InvalidArgument: return 1;
        case ErrorKind::NotPrimitive:
        case ErrorKind::NotExpanding: return 2;
        case ErrorKind::CollarFailure: return 3;
        case ErrorKind::Infeasible: return 4;
        case ErrorKind::DepthFailure: return 5;
    }
    return 1;
}

std::filesystem::path out_path(const Config& c, const std::string& name) { return std::filesystem::path(c.out) / name; }

void write_json(const Config& c, const std::string& name, json body) {
    body["config"] = c.to_json();
    body["version"] = WIELER_VERSION;
    write_file(out_path(c, name).string(), body.dump(2) + "\n");
}

json rule_json(const Analysis& an) {
    return json{{"text", an.input.to_text()}, {"working_power", an.prepared.primitivity.power},
                {"collared_letters", an.complex.collared.size()}, {"border_forcing_power", an.complex.collared.forcing_power}};
}

/// mean-zero random function of the first `level + 1` letters
CylinderFunction random_mean_zero(const Analysis& an, std::size_t level, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1, 1);
    auto f = make_function(an.measure, level, [&](const Word&) { return d(rng); });
    const double m = mean(f, an.measure);
    for (auto& [w, v] : f.values) v -= m;
    return f;
}

CylinderFunction load_function(const Analysis& an, const std::string& spec, std::size_t level, unsigned seed) {
    if (spec == "random") return random_mean_zero(an, level, seed);
    if (spec == "one") return constant_function(an.measure, 1.0);
    if (spec == "zero") return constant_function(an.measure, 0.0);
    return parse_function_csv(read_file(spec), an.rule, an.measure);
}

double default_alpha(const Analysis& an, double alpha) { return std::max(alpha, an.spectrum.alpha_threshold() + 1.0); }

int cmd_analyze(const Config& c, const Analysis& an) {
    json body;
    body["rule"] = rule_json(an);
    body["perron"] = to_json(an.pd);
    body["cohomology"] = to_json(an.cohomology);
    body["spectrum"] = to_json(an.spectrum);
    const auto pred = ruelle_prediction(an.spectrum, c.r, default_alpha(an, c.alpha), c.kmax);
    body["prediction"] = to_json(pred);
    body["deviation_table"] = to_json(deviation_exponent_table(an.spectrum));
    body["pisot"] = pred.pisot;
    write_json(c, "analysis.json", body);
    std::cout << "lambda " << an.pd.lambda << ", H1 rank " << an.cohomology.h1_rank << ", predicted resonances " << pred.base_set.size()
              << (pred.pisot ? " (Pisot)" : "") << "\n";
    return 0;
}

int cmd_correlations(const Config& c, const Analysis& an) {
    const int nmax = c.nmax < 0 ? 12 : c.nmax;
    const std::size_t level = c.depth < 0 ? 2 : static_cast<std::size_t>(c.depth);
    double vmin = *std::min_element(an.pd.left_vec.begin(), an.pd.left_vec.end());
    const double eps = c.epsilon > 0 ? c.epsilon : vmin / 5;
    const auto hf = load_function(an, c.f, level, c.seed);
    const auto hg = load_function(an, c.g, level, c.seed + 1);
    const auto F = realize(suspend(hf, eps, an.pd, an.measure), an.complex, an.rule, an.pd);
    const auto G = realize(suspend(hg, eps, an.pd, an.measure), an.complex, an.rule, an.pd);
    CorrelationOptions opt;
    opt.order = c.quad_order;
    opt.max_panels = c.max_panels;
    const auto seq = correlation_sequence(F, G, nmax, an.complex, opt);

    std::string csv = "n,C_n,error\n";
    std::vector<double> centered, err;
    const double product = mean(hf, an.measure) * mean(hg, an.measure);
    for (const auto& v : seq) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.3g\n", v.n, v.value, v.error_bound);
        csv += buf;
        centered.push_back(v.value - product);
        err.push_back(v.error_bound);
    }
    write_file(out_path(c, "correlations.csv").string(), csv);

    json body;
    body["rule"] = rule_json(an);
    const auto pred = ruelle_prediction(an.spectrum, c.r, default_alpha(an, c.alpha), c.kmax);
    body["prediction"] = to_json(pred);
    body["mean_product"] = product;
    std::string note;
    double scale = 0;
    for (double x : centered) scale = std::max(scale, std::abs(x));
    if (scale <= 1e-12) {
        note = "series is constant after removing the product of means; fit skipped";
        body["fit"] = nullptr;
    } else {
        try {
            const auto fit = extract_resonances(centered, err, static_cast<std::size_t>(c.rates));
            body["fit"] = to_json(fit);
            if (pred.base_set.empty()) {
                note = "prediction set is empty; decay is expected faster than every predicted rate";
            } else if (!fit.rates.empty()) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& mu : pred.base_set) best = std::min(best, std::abs(fit.rates[0] - mu));
                body["leading_rate_distance"] = best;
            }
        } catch (const Error& e) {
            note = std::string("fit not possible: ") + e.what();
            body["fit"] = nullptr;
        }
    }
    body["note"] = note;
    write_json(c, "resonances.json", body);
    std::cout << "wrote " << seq.size() << " correlations" << (note.empty() ? "" : "; " + note) << "\n";
    return 0;
}

int cmd_deviations(const Config& c, const Analysis& an) {
    const int nmax = c.nmax < 0 ? 25 : c.nmax;
    const std::size_t level = c.depth < 0 ? 1 : static_cast<std::size_t>(c.depth);
    const auto h = load_function(an, c.f, level, c.seed);
    const auto sums = supertile_sums(h, an.complex, an.rule, an.pd, nmax, c.weighted);
    const auto table = deviation_exponent_table(an.spectrum);
    const auto rep = fit_deviation(sums, an.complex, table);
    std::string csv = "n,letter,S\n";
    for (int n = sums.n0; n <= nmax; ++n)
        for (std::size_t e = 0; e < an.complex.num_edges(); ++e) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%d,%s,%.17g\n", n, an.complex.collared.rule.alphabet[e].c_str(), sums.S[static_cast<std::size_t>(n)][e]);
            csv += buf;
        }
    write_file(out_path(c, "supertile_sums.csv").string(), csv);
    json body;
    body["rule"] = rule_json(an);
    body["table"] = to_json(table);
    body["report"] = to_json(rep);
    body["base_level"] = sums.n0;
    write_json(c, "deviations.json", body);
    std::cout << (rep.zero ? std::string("zero function") : "overall exponent " + std::to_string(rep.overall->slope)) << (rep.bounded ? " (bounded)" : "")
              << "\n";
    return 0;
}

int cmd_coboundary(const Config& c, const Analysis& an) {
    if (c.function.empty()) throw Error(ErrorKind::InvalidArgument, "coboundary needs --function");
    const auto h = parse_function_csv(read_file(c.function), an.rule, an.measure);
    const std::size_t depth = c.depth < 0 ? h.level + 1 : static_cast<std::size_t>(c.depth);
    json body;
    body["rule"] = rule_json(an);
    const auto gh = gottschalk_hedlund_scan(an, h, c.scan);
    body["gottschalk_hedlund"] = to_json(gh);
    TransferOptions opt;
    opt.scan_length = c.scan;
    opt.tolerance = c.tolerance;
    opt.override_obstruction = c.override_obstruction;
    const auto res = solve_transfer(an, h, c.alpha, depth, opt);
    auto ob = obstruction_vector(an, h, c.alpha, static_cast<std::size_t>(c.truncation));
    body["obstruction"] = to_json(ob);
    body["solved"] = res.solved;
    std::string verdict;
    if (res.solved) {
        const auto& s = *res.solution;
        write_file(out_path(c, "u.csv").string(), function_to_csv(s.u, an.rule));
        body["residual"] = s.residual;
        body["holder"] = s.holder ? to_json(*s.holder) : json(nullptr);
        body["level_bound"] = s.level_bound;
        body["steps_used"] = s.steps_used;
        verdict = s.residual <= 1e-6 ? "coboundary" : "forced solution does not satisfy the equation";
    } else {
        body["reason"] = res.reason;
        verdict = gh.verdict == "linear" ? "linear growth, not a coboundary" : "obstructed";
    }
    body["verdict"] = verdict;
    write_json(c, "coboundary.json", body);
    std::cout << verdict << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Config c;
    CLI::App app{"Cohomology, resonances and deviations for substitution tilings"};
    app.set_version_flag("--version", std::string(WIELER_VERSION));
    app.set_config("--config", "", "key = value configuration file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("command", c.command, "analyze | correlations | deviations | coboundary")
        ->required()
        ->check(CLI::IsMember({"analyze", "correlations", "deviations", "coboundary"}));
    app.add_option("rule_file", c.rule, "rule file (same as --rule)");
    app.add_option("--rule", c.rule, "rule file");
    app.add_option("--out", c.out, "output directory");
    app.add_option("--nmax", c.nmax, "largest n (correlations: 12, deviations: 25)")->check(CLI::Range(0, 200));
    app.add_option("--depth", c.depth, "function level, or transfer function word length")->check(CLI::Range(0, 12));
    app.add_option("--alpha", c.alpha, "Hoelder exponent")->check(CLI::Range(0.0, 100.0));
    app.add_option("--r", c.r, "leafwise regularity")->check(CLI::Range(0, 3));
    app.add_option("--kmax", c.kmax, "ladder cutoff")->check(CLI::Range(0, 20));
    app.add_option("--quad-order", c.quad_order, "Gauss-Legendre order")->check(CLI::Range(1, 200));
    app.add_option("--epsilon", c.epsilon, "bump half-width (default: min length / 5)")->check(CLI::Range(0.0, 10.0));
    app.add_option("--rates", c.rates, "number of fitted rates")->check(CLI::Range(1, 12));
    app.add_option("--max-panels", c.max_panels, "refuse correlations needing more panels")->check(CLI::PositiveNumber);
    app.add_option("--tolerance", c.tolerance, "obstruction tolerance")->check(CLI::PositiveNumber);
    app.add_option("--scan", c.scan, "fixed-point scan length")->check(CLI::Range(std::size_t{10}, std::size_t{100000000}));
    app.add_option("--truncation", c.truncation, "obstruction truncation K")->check(CLI::Range(0, 40));
    app.add_option("--f", c.f, "first function: CSV file, random, one or zero");
    app.add_option("--g", c.g, "second function: CSV file, random, one or zero");
    app.add_option("--function", c.function, "function CSV for coboundary");
    app.add_flag("--weighted", c.weighted, "weight supertile sums by tile length");
    app.add_flag("--override", c.override_obstruction, "solve even when the obstruction is nonzero");
    app.add_option("--seed", c.seed, "seed for random functions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }

    try {
        if (c.rule.empty()) throw Error(ErrorKind::InvalidArgument, "no rule file given");
        std::filesystem::create_directories(c.out);
        const auto an = analyze(parse_rule(read_file(c.rule)));
        if (c.command == "analyze") return cmd_analyze(c, an);
        if (c.command == "correlations") return cmd_correlations(c, an);
        if (c.command == "deviations") return cmd_deviations(c, an);
        return cmd_coboundary(c, an);
    } catch (const Error& e) {
        const json j = error_json(e);
        std::cerr << j.dump() << "\n";
        try {
            std::filesystem::create_directories(c.out);
            write_file(out_path(c, "error.json").string(), j.dump(2) + "\n");
        } catch (...) {
        }
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }
}
