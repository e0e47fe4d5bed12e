// ri: command-line front end for the rearrangement-operator library.
//
// Subcommands: verify (named suites), norm, tq, gamma, coincidence,
// probe, census. Exit codes: 0 pass, 1 assertion failure, 2 usage error.

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rr/coincidence.hpp"
#include "rr/corpus.hpp"
#include "rr/criteria.hpp"
#include "rr/json_io.hpp"
#include "rr/permops.hpp"
#include "rr/suites.hpp"

using namespace rr;

namespace {

int cmd_verify(const std::string& suite, const std::string& config_path, const std::string& out) {
    SuiteConfig cfg;
    if (!config_path.empty()) cfg = SuiteConfig::from_json(load_json_file(config_path));
    if (!out.empty()) cfg.out_dir = out;
    std::vector<std::string> which;
    if (suite != "all") {
        const auto& names = suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end()) {
            std::cerr << "unknown suite '" << suite << "'\n";
            return 2;
        }
        which.push_back(suite);
    }
    const bool ok = run_all(cfg, which);
    for (const auto& name : which.empty() ? suite_names() : which) {
        const json rep = load_json_file(cfg.out_dir + "/" + name + ".json");
        const auto& summary = rep.at("summary");
        std::printf("%-16s %4zu cases  %2d failures%s\n", name.c_str(),
                    summary.at("cases").get<std::size_t>(), summary.at("failures").get<int>(),
                    summary.at("failures").get<int>() ? "  <-- FAIL" : "");
        if (summary.at("failures").get<int>() > 0)
            for (const auto& c : rep.at("cases"))
                if (!c.at("pass").get<bool>())
                    std::printf("    failing: %s  lhs=%.12g rhs=%.12g\n",
                                c.at("id").get<std::string>().c_str(), c.at("lhs").get<double>(),
                                c.at("rhs").get<double>());
    }
    std::printf("reports written to %s\n", cfg.out_dir.c_str());
    return ok ? 0 : 1;
}

int cmd_norm(const std::string& space, const std::string& input) {
    const SpaceSpec e = SpaceSpec::parse(space);
    const StepFunction x = step_function_from_json(load_json_file(input));
    std::printf("%.17g\n", e.norm(x));
    return 0;
}

int cmd_tq(const std::string& matrix_path, double q, bool q_inf, const std::string& space,
           const std::string& mode, int samples, std::uint64_t seed, int workers, bool law) {
    const MatrixN x = matrix_from_json(load_json_file(matrix_path));
    const SpaceSpec e = SpaceSpec::parse(space);
    const double qq = q_inf ? kQInf : q;
    if (law) {
        std::cout << to_json(tq_distribution(x, qq)).dump(2) << "\n";
        return 0;
    }
    if (mode == "exact") {
        std::printf("%.17g\n", tq_norm_exact(x, qq, e));
        return 0;
    }
    if (mode == "mc") {
        const auto est = tq_norm_mc(x, qq, e, samples, seed, workers);
        std::printf("%.17g stderr %.6g samples %d\n", est.value, est.std_error, est.samples);
        return 0;
    }
    std::cerr << "mode must be exact or mc\n";
    return 2;
}

int cmd_gamma(const std::string& phi_text, double q, long jmax) {
    const PhiSpec phi = PhiSpec::parse(phi_text);
    const auto g = gamma(phi, q, jmax);
    json out{{"phi", phi_text},
             {"q", q},
             {"j_max", jmax},
             {"value", g.value},
             {"diverged", g.diverged},
             {"log_t_witness", g.log_t_witness},
             {"j_used", g.j_used},
             {"truncation_estimate", g.truncation_estimate}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_coincidence(int n, int k, bool as_json) {
    if (k < 0) k = n;
    if (n < 1 || k > n) {
        std::cerr << "need 1 <= k <= n\n";
        return 2;
    }
    json atoms = json::array();
    for (int j = 0; j <= k; ++j) {
        const BigRat mu = mu_exact(n, k, j);
        atoms.push_back(json{{"j", j},
                             {"num", mu.get_num().get_str()},
                             {"den", mu.get_den().get_str()},
                             {"approx", to_double(mu)}});
    }
    if (as_json) {
        std::cout << json{{"n", n}, {"k", k}, {"mu", atoms}}.dump(2) << "\n";
    } else {
        std::printf("mu_{%d,%d,j}:\n", n, k);
        for (const auto& a : atoms)
            std::printf("  j=%-3d %s/%s ~ %.12g\n", a.at("j").get<int>(),
                        a.at("num").get<std::string>().c_str(),
                        a.at("den").get<std::string>().c_str(), a.at("approx").get<double>());
    }
    return 0;
}

int cmd_probe(const std::string& space, const std::string& corpus_path, bool dstar,
              std::uint64_t seed, int tuples) {
    const SpaceSpec e = SpaceSpec::parse(space);
    std::vector<std::vector<StepFunction>> corpus;
    if (!corpus_path.empty()) {
        const json j = load_json_file(corpus_path);
        for (const auto& tup : j.at("tuples")) {
            std::vector<StepFunction> t;
            for (const auto& f : tup) t.push_back(step_function_from_json(f));
            corpus.push_back(std::move(t));
        }
    } else {
        corpus = tuple_corpus(seed, tuples);
    }
    const auto rep = dconvex_probe(e, corpus, dstar);
    json out{{"space", rep.family},
             {"direction", dstar ? "dstar" : "dconvex"},
             {"constant", rep.constant},
             {"witness_index", rep.witness_index},
             {"tuples", rep.samples}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_census(const std::string& mfunc, double a, double b, int p, const std::string& nrange,
               const std::string& mrange) {
    auto parse_range = [](const std::string& text) {
        const auto pos = text.find(':');
        if (pos == std::string::npos) throw std::invalid_argument("range must be lo:hi");
        return std::pair<int, int>{std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 1))};
    };
    const auto [nlo, nhi] = parse_range(nrange);
    const auto [mlo, mhi] = parse_range(mrange);
    const auto c = almost_convex_census(MFunc::parse(mfunc), a, b, p, nlo, nhi, mlo, mhi);
    json per_m = json::array();
    for (std::size_t i = 0; i < c.m_values.size(); ++i)
        per_m.push_back(json{{"m", c.m_values[i]},
                             {"violations", c.violations[i]},
                             {"budget", c.budget[i]}});
    json out{{"M", mfunc}, {"a", a}, {"b", b}, {"p", p}, {"pass", c.pass}, {"per_m", per_m}};
    std::cout << out.dump(2) << "\n";
    return c.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rearrangement operators and invariant-space verification"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    std::string suite = "all", config_path, out_dir;
    verify->add_option("--suite", suite, "suite name or 'all'");
    verify->add_option("--config", config_path, "config json path");
    verify->add_option("--out", out_dir, "report directory");

    auto* norm = app.add_subcommand("norm", "norm of a step function");
    std::string space = "lp:1", input;
    norm->add_option("--space", space, "space spec, e.g. lorentz:1:phi_p:0.5")->required();
    norm->add_option("--input", input, "step function json")->required();

    auto* tq = app.add_subcommand("tq", "norm of the permutation-sum law of a matrix");
    std::string matrix_path, mode = "exact", tq_space = "lp:1";
    double q = 1.0;
    bool q_inf = false;
    int samples = 100000, workers = 1;
    bool law = false;
    std::uint64_t seed = 1;
    tq->add_option("--matrix", matrix_path, "matrix json")->required();
    tq->add_flag("--law", law, "print the exact value distribution instead of a norm");
    tq->add_option("--q", q, "exponent (>= 1)");
    tq->add_flag("--qinf", q_inf, "use the max form");
    tq->add_option("--space", tq_space, "space spec");
    tq->add_option("--mode", mode, "exact|mc");
    tq->add_option("--samples", samples, "mc sample count");
    tq->add_option("--seed", seed, "mc seed");
    tq->add_option("--workers", workers, "mc worker threads");

    auto* gam = app.add_subcommand("gamma", "series criterion for a phi family");
    std::string phi_text = "phi_p:0.5";
    double gq = 1.0;
    long jmax = 400;
    gam->add_option("--phi", phi_text, "phi spec, e.g. phi_p:0.5 or power:1:0.5");
    gam->add_option("--q", gq, "exponent");
    gam->add_option("--jmax", jmax, "series truncation");

    auto* coin = app.add_subcommand("coincidence", "exact coincidence probabilities");
    int cn = 10, ck = -1;
    bool cjson = false;
    coin->add_option("--n", cn, "permutation size")->required();
    coin->add_option("--k", ck, "prefix length (default n)");
    coin->add_flag("--json", cjson, "json output");

    auto* probe = app.add_subcommand("probe", "dilation convexity probe");
    std::string probe_space = "lp:2", corpus_path;
    bool dconv = false, dstar = false;
    std::uint64_t probe_seed = 2024;
    int probe_tuples = 60;
    probe->add_option("--space", probe_space, "space spec")->required();
    probe->add_flag("--dconvex", dconv, "dilation upper direction");
    probe->add_flag("--dstar", dstar, "dilation lower direction");
    probe->add_option("--corpus", corpus_path, "tuple corpus json");
    probe->add_option("--seed", probe_seed, "generated corpus seed");
    probe->add_option("--tuples", probe_tuples, "generated corpus size");

    auto* census = app.add_subcommand("census", "almost-convexity census of a generator");
    std::string census_m = "power:2", nrange = "-64:64", mrange = "1:12";
    double ca = 2.0, cb = 2.0;
    int cp = 1;
    census->add_option("--M", census_m, "generator spec, e.g. exp_p:0.5");
    census->add_option("--a", ca, "scale base (> 1)");
    census->add_option("--b", cb, "budget base (> 1)");
    census->add_option("--p", cp, "shift allowance");
    census->add_option("--nrange", nrange, "lo:hi");
    census->add_option("--mrange", mrange, "lo:hi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
    }

    try {
        if (verify->parsed()) return cmd_verify(suite, config_path, out_dir);
        if (norm->parsed()) return cmd_norm(space, input);
        if (tq->parsed()) return cmd_tq(matrix_path, q, q_inf, tq_space, mode, samples, seed, workers, law);
        if (gam->parsed()) return cmd_gamma(phi_text, gq, jmax);
        if (coin->parsed()) return cmd_coincidence(cn, ck, cjson);
        if (probe->parsed()) {
            if (dconv == dstar) {
                std::cerr << "pick exactly one of --dconvex / --dstar\n";
                return 2;
            }
            return cmd_probe(probe_space, corpus_path, dstar, probe_seed, probe_tuples);
        }
        if (census->parsed()) return cmd_census(census_m, ca, cb, cp, nrange, mrange);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
