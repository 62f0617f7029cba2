#include "normlab/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include "normlab/constants.hpp"

namespace normlab {

nlohmann::json cplx_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex value must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json to_json(const VectorFunction& f) {
    nlohmann::json values = nlohmann::json::array();
    for (std::int64_t t = 0; t < f.size(); ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (cplx z : f.value(t)) row.push_back(cplx_to_json(z));
        values.push_back(std::move(row));
    }
    return {{"group", f.group().orders()}, {"dim", f.dim()}, {"values", std::move(values)}};
}

VectorFunction vector_function_from_json(const nlohmann::json& j) {
    FiniteAbelianGroup g(j.at("group").get<std::vector<std::int64_t>>());
    std::int64_t d = j.at("dim").get<std::int64_t>();
    const auto& rows = j.at("values");
    if (static_cast<std::int64_t>(rows.size()) != g.cardinality())
        throw std::invalid_argument("values array must have one entry per group element");
    std::vector<cplx> vals;
    vals.reserve(static_cast<std::size_t>(g.cardinality() * d));
    for (const auto& row : rows) {
        if (static_cast<std::int64_t>(row.size()) != d)
            throw std::invalid_argument("value row has wrong dimension");
        for (const auto& entry : row) vals.push_back(cplx_from_json(entry));
    }
    return VectorFunction(std::move(g), d, std::move(vals));
}

nlohmann::json vectors_to_json(const std::vector<std::vector<cplx>>& xs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : xs) {
        nlohmann::json row = nlohmann::json::array();
        for (cplx z : x) row.push_back(cplx_to_json(z));
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<cplx>> vectors_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("vector list must be a JSON array");
    std::vector<std::vector<cplx>> xs;
    xs.reserve(j.size());
    for (const auto& row : j) {
        std::vector<cplx> x;
        x.reserve(row.size());
        for (const auto& entry : row) x.push_back(cplx_from_json(entry));
        xs.push_back(std::move(x));
    }
    return xs;
}

nlohmann::json characters_to_json(const std::vector<Character>& xis) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& xi : xis) out.push_back(xi.coords);
    return out;
}

std::vector<Character> characters_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("character list must be a JSON array");
    std::vector<Character> xis;
    xis.reserve(j.size());
    for (const auto& row : j) xis.push_back(Character{row.get<std::vector<std::int64_t>>()});
    return xis;
}

nlohmann::json estimate_to_json(const ConstantEstimate& est, double runtime_ms) {
    nlohmann::json j{{"constant", est.constant},
                     {"lower", est.lower},
                     {"method", method_name(est.method)},
                     {"seed", est.seed},
                     {"samples", est.samples},
                     {"witness", est.witness},
                     {"runtime_ms", runtime_ms}};
    if (std::isinf(est.upper))
        j["upper"] = "inf";
    else
        j["upper"] = est.upper;
    return j;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace normlab
