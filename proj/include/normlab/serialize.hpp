#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "normlab/group.hpp"
#include "normlab/l2.hpp"

namespace normlab {

struct ConstantEstimate;

// Complex numbers travel as [re, im] pairs.
nlohmann::json cplx_to_json(cplx z);
cplx cplx_from_json(const nlohmann::json& j);

// { "group": [4, 2], "dim": 3, "values": [ [[re,im],...], ... ] } with one
// inner array per flat group index.
nlohmann::json to_json(const VectorFunction& f);
VectorFunction vector_function_from_json(const nlohmann::json& j);

// [ [[re,im],...], ... ] - a list of vectors in C^d.
nlohmann::json vectors_to_json(const std::vector<std::vector<cplx>>& xs);
std::vector<std::vector<cplx>> vectors_from_json(const nlohmann::json& j);

// [ [c1,...,cr], ... ] - a list of character coordinate tuples.
nlohmann::json characters_to_json(const std::vector<Character>& xis);
std::vector<Character> characters_from_json(const nlohmann::json& j);

// Flat single-result report. `upper` serializes as the string "inf" when
// infinite (JSON has no infinity literal). runtime_ms is passed by the
// caller so the measured payload stays separate from measured time.
nlohmann::json estimate_to_json(const ConstantEstimate& est, double runtime_ms);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

} // namespace normlab
