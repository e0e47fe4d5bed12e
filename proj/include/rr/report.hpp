#pragma once

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "rr/matrix.hpp"
#include "rr/rng.hpp"

namespace rr {

constexpr const char* kVersion = "0.1.0";

inline std::uint64_t digest_matrix(const MatrixN& m) {
    const int n = m.n();
    std::uint64_t h = fnv1a64(&n, sizeof(n));
    return fnv1a64(m.entries().data(), m.entries().size() * sizeof(double), h);
}

inline std::uint64_t digest_array(const Array3N& a) {
    std::uint64_t h = fnv1a64(&a.n, sizeof(a.n));
    return fnv1a64(a.e.data(), a.e.size() * sizeof(double), h);
}

/// One verified inequality instance inside a suite.
struct SuiteCase {
    std::string id;
    std::uint64_t digest = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;  // the measured ratio the suite tracks
    bool pass = true;
    std::string note;
};

/// Machine-readable outcome of one named suite. Content is a pure function
/// of the configuration (no clocks, no addresses), so re-running a seed
/// reproduces the bytes.
struct SuiteReport {
    std::string suite;
    std::vector<SuiteCase> cases;
    nlohmann::json config_echo;

    int failures() const {
        int f = 0;
        for (const auto& c : cases) f += !c.pass;
        return f;
    }

    bool passed() const { return failures() == 0; }

    const SuiteCase* worst() const {
        const SuiteCase* w = nullptr;
        for (const auto& c : cases)
            if (!w || c.constant > w->constant) w = &c;
        return w;
    }

    void add(SuiteCase c) { cases.push_back(std::move(c)); }

    void check(std::string id, std::uint64_t digest, double lhs, double rhs, double constant,
               bool pass, std::string note = "") {
        cases.push_back(SuiteCase{std::move(id), digest, lhs, rhs, constant, pass, std::move(note)});
    }

    nlohmann::json to_json() const {
        nlohmann::json jcases = nlohmann::json::array();
        for (const auto& c : cases) {
            char dig[32];
            std::snprintf(dig, sizeof(dig), "%016" PRIx64, c.digest);
            jcases.push_back(nlohmann::json{{"id", c.id},
                                            {"digest", dig},
                                            {"lhs", c.lhs},
                                            {"rhs", c.rhs},
                                            {"constant", c.constant},
                                            {"pass", c.pass},
                                            {"note", c.note}});
        }
        nlohmann::json summary{{"cases", cases.size()}, {"failures", failures()}};
        if (const SuiteCase* w = worst()) {
            summary["worst_constant"] = w->constant;
            summary["worst_id"] = w->id;
        }
        return nlohmann::json{{"suite", suite},
                              {"version", kVersion},
                              {"config", config_echo},
                              {"summary", summary},
                              {"cases", jcases}};
    }

    std::string to_csv() const {
        std::string out = "suite,id,digest,lhs,rhs,constant,pass,note\n";
        char line[512];
        for (const auto& c : cases) {
            std::snprintf(line, sizeof(line), "%s,%s,%016" PRIx64 ",%.17g,%.17g,%.17g,%d,%s\n",
                          suite.c_str(), c.id.c_str(), c.digest, c.lhs, c.rhs, c.constant,
                          c.pass ? 1 : 0, c.note.c_str());
            out += line;
        }
        return out;
    }
};

}  // namespace rr
