#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rr/matrix.hpp"
#include "rr/step_function.hpp"

namespace rr {

using nlohmann::json;

inline json to_json(const StepFunction& x) {
    return json{{"breakpoints", x.breakpoints()}, {"values", x.values()}};
}

inline StepFunction step_function_from_json(const json& j) {
    if (!j.contains("breakpoints") || !j.contains("values"))
        throw std::invalid_argument("step function json needs breakpoints and values");
    return StepFunction(j.at("breakpoints").get<std::vector<double>>(),
                        j.at("values").get<std::vector<double>>());
}

inline json to_json(const ValueDistribution& d) {
    json atoms = json::array();
    for (const auto& a : d.atoms)
        atoms.push_back(json{{"value", a.value}, {"num", a.mass.num()}, {"den", a.mass.den()}});
    return json{{"atoms", atoms}};
}

inline ValueDistribution value_distribution_from_json(const json& j) {
    std::vector<ValueDistribution::Atom> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back({a.at("value").get<double>(),
                         Rat64(a.at("num").get<std::int64_t>(), a.at("den").get<std::int64_t>())});
    return ValueDistribution::from_atoms(std::move(atoms));
}

inline json to_json(const MatrixN& m) {
    return json{{"n", m.n()}, {"entries", m.entries()}};
}

inline MatrixN matrix_from_json(const json& j) {
    return MatrixN(j.at("n").get<int>(), j.at("entries").get<std::vector<double>>());
}

inline json to_json(const Array3N& a) {
    return json{{"n", a.n}, {"entries", a.e}};
}

inline Array3N array3_from_json(const json& j) {
    return Array3N(j.at("n").get<int>(), j.at("entries").get<std::vector<double>>());
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace rr
