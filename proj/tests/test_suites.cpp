#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rr/suites.hpp"

using namespace rr;

namespace {

SuiteConfig small_config() {
    SuiteConfig cfg;
    cfg.seed = 777;
    cfg.a_n_lo = 2;
    cfg.a_n_hi = 4;
    cfg.a_trials = 20;
    cfg.b_n_hi = 4;
    cfg.b_trials = 10;
    cfg.b_pairs = {{1, 1}, {1, 2}};
    cfg.i123_n_hi = 4;
    cfg.i123_trials = 6;
    cfg.t7_n_hi = 4;
    cfg.t7_trials = 5;
    cfg.t1019_n_hi = 6;
    cfg.t27_n_hi = 4;
    cfg.t27_trials = 4;
    cfg.td_n_hi = 3;
    cfg.td_trials = 4;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("every suite passes at smoke scale") {
    const SuiteConfig cfg = small_config();
    for (const auto& name : suite_names()) {
        const SuiteReport rep = run_suite(name, cfg);
        INFO(name << ": " << rep.failures() << " failures of " << rep.cases.size());
        if (rep.failures() > 0)
            for (const auto& c : rep.cases)
                if (!c.pass) WARN(name << " failed case " << c.id << " lhs=" << c.lhs
                                       << " rhs=" << c.rhs << " constant=" << c.constant);
        CHECK(rep.passed());
        CHECK(rep.cases.size() > 0);
    }
}

TEST_CASE("reports are bit-identical for a fixed seed") {
    SuiteConfig cfg = small_config();
    namespace fs = std::filesystem;
    const std::string d1 = (fs::temp_directory_path() / "rr_rep_a").string();
    const std::string d2 = (fs::temp_directory_path() / "rr_rep_b").string();
    fs::remove_all(d1);
    fs::remove_all(d2);
    cfg.out_dir = d1;
    CHECK(run_all(cfg, {"mean_max", "moment_bounds"}));
    cfg.out_dir = d2;
    CHECK(run_all(cfg, {"mean_max", "moment_bounds"}));
    for (const std::string f : {"mean_max.json", "mean_max.csv", "moment_bounds.json", "summary.json"}) {
        const std::string a = slurp(d1 + "/" + f);
        CHECK(a == slurp(d2 + "/" + f));
        CHECK(!a.empty());
    }
}

TEST_CASE("a different seed changes the corpus but not the verdicts") {
    SuiteConfig cfg = small_config();
    const SuiteReport r1 = suite_mean_max(cfg);
    cfg.seed = 778;
    const SuiteReport r2 = suite_mean_max(cfg);
    CHECK(r1.passed());
    CHECK(r2.passed());
    bool any_digest_differs = false;
    for (std::size_t i = 0; i < std::min(r1.cases.size(), r2.cases.size()); ++i)
        any_digest_differs = any_digest_differs || r1.cases[i].digest != r2.cases[i].digest;
    CHECK(any_digest_differs);
}

TEST_CASE("config json round trip") {
    SuiteConfig cfg = small_config();
    const SuiteConfig back = SuiteConfig::from_json(cfg.to_json());
    CHECK(back.seed == cfg.seed);
    CHECK(back.a_trials == cfg.a_trials);
    CHECK(back.b_pairs == cfg.b_pairs);
    CHECK(back.spaces == cfg.spaces);
    CHECK(back.t27_lower_pin == cfg.t27_lower_pin);
}

TEST_CASE("matrix and step function json round trips") {
    const MatrixN m(2, {0.5, 0.0, 1.5, 2.0});
    CHECK(matrix_from_json(to_json(m)) == m);
    const StepFunction f({0.0, 0.25, 1.0}, {2.0, 1.0});
    CHECK(step_function_from_json(to_json(f)) == f);
    const auto d = tq_distribution(m, 1.0);
    CHECK(value_distribution_from_json(to_json(d)) == d);
    const Array3N a(2, {1, 2, 3, 4, 5, 6, 7, 8});
    const Array3N b = array3_from_json(to_json(a));
    CHECK(a.e == b.e);
}
