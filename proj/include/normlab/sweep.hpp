#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "normlab/constants.hpp"
#include "normlab/toml_mini.hpp"

namespace normlab {

// One experiment in a sweep family. Fields are interpreted per kind:
// opnorm uses group/norm/iterations/restarts; khinchin uses norm/vectors;
// charsys uses group/norm/vectors/characters; torus uses
// norm/vectors/degree/quad_points; transfer uses
// norm/base/depth/blocks/eps/order.
struct MemberSpec {
    std::string group;
    std::string norm;
    std::string vectors = "basis";    // "basis" or a JSON file path
    std::string characters = "all";   // "all" or a JSON file path
    std::int64_t degree = 1;          // torus: sum over k = -degree..degree
    std::int64_t quad_points = 0;     // torus: 0 = automatic refinement
    std::int64_t base = 2;
    std::int64_t depth = 10;
    std::int64_t blocks = 4;
    double eps = 0.01;
    std::string order = "walsh";      // walsh | adversarial
    std::int64_t iterations = 0;      // 0 = inherit config default
    std::int64_t restarts = 0;        // 0 = inherit config default

    bool operator==(const MemberSpec&) const = default;
};

struct SweepConfig {
    std::string kind;                 // opnorm | khinchin | charsys | torus | transfer
    std::uint64_t seed = 0;
    std::int64_t iterations = 200;
    std::int64_t restarts = 32;
    std::string out_json;
    std::string out_csv;
    std::vector<MemberSpec> members;

    bool operator==(const SweepConfig&) const = default;
};

// Human-readable problems; empty means the config is runnable.
std::vector<std::string> validate_sweep(const SweepConfig& cfg);

SweepConfig sweep_from_document(const tomlmini::Document& doc, std::vector<std::string>& errors);
SweepConfig parse_sweep_config(const std::string& text, std::vector<std::string>& errors);
tomlmini::Document sweep_to_document(const SweepConfig& cfg);
std::string serialize_sweep_config(const SweepConfig& cfg);

struct SweepRow {
    std::int64_t member_id = 0;
    std::string group;
    std::string norm;
    ConstantEstimate estimate;
    double runtime_ms = 0.0;
};

struct SweepReport {
    SweepConfig config;
    std::vector<SweepRow> rows;
    double total_ms = 0.0;
};

// Runs one member with its derived per-member seed.
ConstantEstimate run_member(const SweepConfig& cfg, std::size_t index);

// Validates, then runs every member in order. Throws on invalid configs.
SweepReport run_sweep(const SweepConfig& cfg);

// Deterministic CSV: identical configs and seeds give identical bytes, so
// the runtime_ms column is left empty (timings live in the JSON report).
std::string report_csv(const SweepReport& report);

// Full report; measured wall times are segregated under "runtime".
nlohmann::json report_json(const SweepReport& report);

// Re-evaluates a row's witnessed lower bound from the witness alone.
double evaluate_witness(const std::string& kind, const NormSpec& spec,
                        const nlohmann::json& witness);

} // namespace normlab
