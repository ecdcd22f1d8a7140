// poe: batch driver for model generation, moments, certification, recovery, invariant
// suites and figure data.
//
// Exit codes: 0 success, 1 verification/certification failure, 2 usage error,
// 64 numerical non-convergence.

#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <string>

#include "poe/poe.hpp"
#include "poe/suites.hpp"

namespace {

using namespace poe;

constexpr int kOk = 0, kFail = 1, kUsage = 2, kNoConvergence = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string case_name = "uniform";
    int ell = 2;
    std::string gamma = "1";
    std::uint64_t seed = 1;
    std::string backend = "float";
    std::string indices;
    std::string out;
    std::string model;
    std::string moments;
    std::string truth;
    std::string suite = "all";
    std::string kind = "fig2";
    std::string svg;
    std::string matrix;
    int starts = 0;
    int max_ell = 8;
    double eps0 = 1e-2;
    double tol = 0;
    bool gamma_from_config = false;
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty())
        std::cout << text;
    else
        write_file(cfg.out, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// "uniform" (1..l+1), "general" (1, 2n, 4n+1), "prony" (0..2^{l+1}-1), or a list like "0-3,5,9".
std::vector<int> parse_indices(const std::string& spec, int ell) {
    if (spec == "uniform") return range_indices(1, ell + 1);
    if (spec == "general" || spec == "theorem") return general_recovery_indices(ell);
    if (spec == "prony") {
        if (ell > 20) throw UsageError("prony index set limited to ell <= 20");
        return range_indices(0, (1 << (ell + 1)) - 1);
    }
    std::vector<int> out;
    std::stringstream ss(spec);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            auto dash = tok.find('-', 1);
            if (dash == std::string::npos) {
                out.push_back(std::stoi(tok));
            } else {
                int lo = std::stoi(tok.substr(0, dash)), hi = std::stoi(tok.substr(dash + 1));
                for (int i = lo; i <= hi; ++i) out.push_back(i);
            }
        }
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse index list '" + spec + "'");
    }
    if (out.empty()) throw UsageError("empty index list");
    for (int i : out)
        if (i < 0) throw UsageError("negative moment index");
    return out;
}

Rational parse_gamma(const std::string& s) {
    Rational g;
    try {
        g = parse_rational(s);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (g <= 0) throw UsageError("gamma must be positive");
    return g;
}

/// Rows separated by ';' or '/', entries by ','.
std::vector<std::vector<int>> parse_matrix(std::string s) {
    std::replace(s.begin(), s.end(), '/', ';');
    std::vector<std::vector<int>> m;
    std::stringstream rows(s);
    std::string row;
    try {
        while (std::getline(rows, row, ';')) {
            std::vector<int> r;
            std::stringstream cols(row);
            std::string v;
            while (std::getline(cols, v, ',')) r.push_back(std::stoi(v));
            if (!m.empty() && r.size() != m[0].size()) throw UsageError("ragged multiplicity matrix");
            m.push_back(r);
        }
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse matrix '" + s + "'");
    }
    if (m.empty() || m[0].empty()) throw UsageError("empty multiplicity matrix");
    return m;
}

// ---------------------------------------------------------------------------

int cmd_gen(const RunConfig& cfg) {
    if (cfg.ell < 1 || cfg.ell > 20) throw UsageError("--ell must be in 1..20");
    if (cfg.case_name != "uniform" && cfg.case_name != "general") throw UsageError("gen --case is uniform or general");
    std::mt19937_64 rng(cfg.seed);
    const bool uniform = cfg.case_name == "uniform";
    if (cfg.backend == "rational")
        emit(cfg, dump(model_to_json(random_rational_params(cfg.ell, rng, uniform))));
    else
        emit(cfg, dump(model_to_json(random_params(cfg.ell, rng, uniform))));
    return kOk;
}

int cmd_moments(const RunConfig& cfg) {
    if (cfg.model.empty()) throw UsageError("moments needs --model");
    auto j = json::parse(read_file(cfg.model));
    const std::string spec = cfg.indices.empty() ? cfg.case_name : cfg.indices;
    if (cfg.backend == "rational") {
        auto p = model_from_json<Rational>(j);
        emit(cfg, moments_to_csv(moments_general(p, parse_indices(spec, p.ell()))));
    } else {
        auto p = model_from_json<double>(j);
        emit(cfg, moments_to_csv(moments_general(p, parse_indices(spec, p.ell()))));
    }
    return kOk;
}

int cmd_certify(const RunConfig& cfg) {
    const Rational g = parse_gamma(cfg.gamma);
    IdentCertificate cert;
    if (cfg.case_name == "uniform") {
        std::vector<int> idx;
        if (!cfg.indices.empty()) idx = parse_indices(cfg.indices, cfg.ell);
        cert = certify_uniform(cfg.ell, g, idx);
    } else if (cfg.case_name == "general") {
        cert = certify_general(cfg.ell, g, cfg.eps0);
    } else if (cfg.case_name == "appendix") {
        std::vector<std::vector<int>> m;
        if (!cfg.matrix.empty()) {
            m = parse_matrix(cfg.matrix);
        } else {
            // random full-rank engineered family of size ell
            std::mt19937_64 rng(cfg.seed);
            std::uniform_int_distribution<int> u(-2, 2);
            do {
                m.assign(cfg.ell, std::vector<int>(cfg.ell));
                for (auto& row : m)
                    for (auto& v : row) v = u(rng);
            } while (rank_over_Q(MultiplicityMatrix{m}) < cfg.ell);
        }
        cert = certify_appendix(engineered_family(m), integer_points(m[0].size()), cfg.seed);
    } else {
        throw UsageError("certify --case is uniform, general or appendix");
    }
    emit(cfg, dump(certificate_to_json(cert)));
    return cert.certified ? kOk : kFail;
}

int cmd_recover(const RunConfig& cfg) {
    if (cfg.moments.empty()) throw UsageError("recover needs --moments");
    const std::string text = read_file(cfg.moments);
    json out;
    bool within = true;
    if (cfg.case_name == "prony") {
        auto m = moments_from_csv<HighPrec>(text);
        auto s = prony_lumped(m);
        out = spectrum_to_json(s);
        if (!cfg.truth.empty()) {
            auto truth = model_from_json<HighPrec>(json::parse(read_file(cfg.truth)));
            // enumeration of the lumped latent
            std::vector<std::pair<double, double>> atoms;
            const int l = truth.ell();
            for (unsigned u = 0; u < (1u << l); ++u) {
                HighPrec prior(1), succ(1);
                for (int k = 0; k < l; ++k) {
                    const auto& f = truth.factors[k];
                    bool bit = (u >> k) & 1u;
                    prior *= bit ? f.pi : HighPrec(1) - f.pi;
                    succ *= bit ? f.alpha1 : f.alpha0;
                }
                atoms.emplace_back(succ.convert_to<double>(), prior.convert_to<double>());
            }
            std::sort(atoms.begin(), atoms.end());
            double err = INFINITY;
            if (atoms.size() == s.support.size()) {
                err = 0;
                for (std::size_t i = 0; i < atoms.size(); ++i)
                    err = std::max({err, std::abs(atoms[i].first - s.support[i]), std::abs(atoms[i].second - s.weights[i])});
            }
            const double tol = cfg.tol > 0 ? cfg.tol : 1e-7;
            within = err <= tol;
            out["truth_comparison"] = {{"max_error", err}, {"tolerance", tol}, {"within_tolerance", within}};
        }
    } else {
        auto m = moments_from_csv<double>(text);
        RecoverOptions opt;
        opt.seed = cfg.seed;
        opt.starts = cfg.starts;
        RecoveryResult r;
        if (cfg.case_name == "uniform")
            r = recover_uniform(m, cfg.ell, opt);
        else if (cfg.case_name == "general")
            r = recover_general(m, cfg.ell, opt);
        else
            throw UsageError("recover --case is uniform, general or prony");
        out = recovery_to_json(r);
        if (!cfg.truth.empty()) {
            auto truth = model_from_json<double>(json::parse(read_file(cfg.truth)));
            if (cfg.case_name == "uniform")
                for (auto& f : truth.factors) f.pi = 0.5;
            double nearest = INFINITY;
            for (const auto& p : r.preimages_found) nearest = std::min(nearest, compare_up_to_symmetry(p, truth));
            const double tol = cfg.tol > 0 ? cfg.tol : (cfg.case_name == "uniform" ? 1e-6 : 1e-5);
            within = nearest <= tol;
            out["truth_comparison"] = {{"distance_recovered", compare_up_to_symmetry(r.recovered, truth)},
                                       {"distance_nearest_preimage", nearest},
                                       {"tolerance", tol},
                                       {"within_tolerance", within}};
        }
    }
    emit(cfg, dump(out));
    return within ? kOk : kFail;
}

json report_json(const SuiteReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"suite", rep.suite}, {"passed", rep.passed()}, {"checks", checks}};
}

int cmd_verify(const RunConfig& cfg, bool gamma_given) {
    std::vector<Rational> gammas{Rational(1), Rational(1, 3)};
    if (gamma_given) gammas = {parse_gamma(cfg.gamma)};
    std::vector<std::string> names;
    if (cfg.suite == "all")
        names = suite_names();
    else if (std::find(suite_names().begin(), suite_names().end(), cfg.suite) != suite_names().end())
        names = {cfg.suite};
    else
        throw UsageError("unknown suite '" + cfg.suite + "'");
    json out = json::array();
    bool ok = true;
    for (const auto& n : names) {
        auto rep = run_suite(n, gammas);
        ok = ok && rep.passed();
        out.push_back(report_json(rep));
    }
    emit(cfg, dump({{"passed", ok}, {"suites", out}}));
    return ok ? kOk : kFail;
}

int cmd_figure(const RunConfig& cfg) {
    if (cfg.kind == "fig2") {
        auto rows = fig2_data(parse_gamma(cfg.gamma));
        emit(cfg, fig2_to_csv(rows));
        if (!cfg.svg.empty()) write_file(cfg.svg, fig2_to_svg(rows));
    } else if (cfg.kind == "economy") {
        if (cfg.max_ell < 1 || cfg.max_ell > 30) throw UsageError("--max-ell must be in 1..30");
        emit(cfg, economy_to_csv(moment_economy_table(cfg.max_ell)));
    } else {
        throw UsageError("figure --kind is fig2 or economy");
    }
    return kOk;
}

int cmd_selftest(const RunConfig& cfg) {
    auto rep = selftest();
    std::string text;
    for (const auto& c : rep.checks)
        text += std::string(c.passed ? "PASS " : "FAIL ") + c.name + (c.detail.empty() ? "" : "  (" + c.detail + ")") + "\n";
    text += std::to_string(rep.checks.size() - rep.failures()) + "/" + std::to_string(rep.checks.size()) + " passed\n";
    emit(cfg, text);
    return rep.passed() ? kOk : kFail;
}

/// Values from a JSON config file become defaults; flags on the command line override them.
void apply_config(RunConfig& cfg, const std::string& path) {
    json j = json::parse(read_file(path));
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    auto str = [&](const char* key, std::string& dst) {
        if (j.contains(key)) dst = j[key].is_string() ? j[key].get<std::string>() : j[key].dump();
    };
    str("case", cfg.case_name);
    str("gamma", cfg.gamma);
    cfg.gamma_from_config = j.contains("gamma");
    str("backend", cfg.backend);
    str("indices", cfg.indices);
    str("out", cfg.out);
    str("model", cfg.model);
    str("moments", cfg.moments);
    str("truth", cfg.truth);
    str("suite", cfg.suite);
    str("kind", cfg.kind);
    str("svg", cfg.svg);
    str("matrix", cfg.matrix);
    if (j.contains("ell")) cfg.ell = j["ell"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("starts")) cfg.starts = j["starts"].get<int>();
    if (j.contains("max_ell")) cfg.max_ell = j["max_ell"].get<int>();
    if (j.contains("eps0")) cfg.eps0 = j["eps0"].get<double>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
}

int run(int argc, char** argv) {
    RunConfig cfg;
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    try {
        if (!config_path.empty()) apply_config(cfg, config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: bad config: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App app{"Product-of-experts moment identifiability toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON file with default option values")->check(CLI::ExistingFile);

    auto common = [&](CLI::App* s) {
        s->add_option("--seed", cfg.seed, "random seed");
        s->add_option("--out", cfg.out, "output path (default stdout)");
    };
    auto with_problem = [&](CLI::App* s) {
        s->add_option("--ell", cfg.ell, "number of factors");
        s->add_option("--gamma", cfg.gamma, "per-factor first moment as p/q");
    };
    auto backend = [&](CLI::App* s) {
        s->add_option("--backend", cfg.backend, "rational or float")->check(CLI::IsMember({"rational", "float"}));
    };

    auto* gen = app.add_subcommand("gen", "write a random model JSON");
    common(gen);
    backend(gen);
    gen->add_option("--ell", cfg.ell, "number of factors");
    gen->add_option("--case", cfg.case_name, "uniform (priors 1/2) or general");

    auto* mom = app.add_subcommand("moments", "write the moment CSV of a model");
    common(mom);
    backend(mom);
    mom->add_option("--model", cfg.model, "model JSON")->check(CLI::ExistingFile);
    mom->add_option("--case", cfg.case_name, "index set name when --indices is absent");
    mom->add_option("--indices", cfg.indices, "uniform | general | prony | list such as 0-3,5");

    auto* cert = app.add_subcommand("certify", "emit an identifiability certificate");
    common(cert);
    with_problem(cert);
    backend(cert);
    cert->add_option("--case", cfg.case_name, "uniform, general or appendix");
    cert->add_option("--indices", cfg.indices, "uniform moment indices (default 2..ell+1)");
    cert->add_option("--eps0", cfg.eps0, "initial cascade tolerance for the general case");
    cert->add_option("--matrix", cfg.matrix, "appendix multiplicity matrix, rows separated by ';' or '/'");

    auto* rec = app.add_subcommand("recover", "recover parameters from a moment CSV");
    common(rec);
    rec->add_option("--ell", cfg.ell, "number of factors");
    rec->add_option("--case", cfg.case_name, "uniform, general or prony");
    rec->add_option("--moments", cfg.moments, "moment CSV")->check(CLI::ExistingFile);
    rec->add_option("--truth", cfg.truth, "true model JSON for comparison")->check(CLI::ExistingFile);
    rec->add_option("--starts", cfg.starts, "number of multi-start points (default 50 ell)");
    rec->add_option("--tol", cfg.tol, "truth comparison tolerance");

    auto* ver = app.add_subcommand("verify", "run invariant suites");
    common(ver);
    auto* ver_gamma = ver->add_option("--gamma", cfg.gamma, "single gamma (default: 1 and 1/3)");
    ver->add_option("--suite", cfg.suite, "gcd | atomic | interlacing | identities | common-zeros | all");

    auto* fig = app.add_subcommand("figure", "emit figure or table data");
    common(fig);
    fig->add_option("--kind", cfg.kind, "fig2 or economy");
    fig->add_option("--gamma", cfg.gamma, "gamma for fig2");
    fig->add_option("--svg", cfg.svg, "also write an SVG scatter");
    fig->add_option("--max-ell", cfg.max_ell, "rows of the economy table");

    auto* self = app.add_subcommand("selftest", "run the worked examples");
    common(self);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*gen) return cmd_gen(cfg);
        if (*mom) return cmd_moments(cfg);
        if (*cert) return cmd_certify(cfg);
        if (*rec) return cmd_recover(cfg);
        if (*ver) return cmd_verify(cfg, ver_gamma->count() > 0 || cfg.gamma_from_config);
        if (*fig) return cmd_figure(cfg);
        if (*self) return cmd_selftest(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const EpsilonCascadeFailure& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const MissingMoment& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const IndexOutOfRange& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConstantPolynomialInFamily& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "usage error: malformed JSON: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
