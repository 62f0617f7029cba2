#include "normlab/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "normlab/rng.hpp"
#include "normlab/serialize.hpp"
#include "normlab/tower.hpp"

namespace normlab {

namespace {

const std::set<std::string> kKinds{"opnorm", "khinchin", "charsys", "torus", "transfer"};

std::vector<std::vector<cplx>> standard_basis(std::int64_t d, std::int64_t count) {
    std::vector<std::vector<cplx>> xs(static_cast<std::size_t>(count),
                                      std::vector<cplx>(static_cast<std::size_t>(d), cplx{0.0, 0.0}));
    for (std::int64_t i = 0; i < count; ++i)
        xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(i % d)] = 1.0;
    return xs;
}

std::vector<std::vector<cplx>> resolve_vectors(const MemberSpec& m, std::int64_t d,
                                               std::int64_t count) {
    if (m.vectors == "basis") return standard_basis(d, count);
    return vectors_from_json(read_json_file(m.vectors));
}

std::vector<Character> all_characters(const FiniteAbelianGroup& g) {
    std::vector<Character> xis;
    xis.reserve(static_cast<std::size_t>(g.cardinality()));
    for (std::int64_t xi = 0; xi < g.cardinality(); ++xi) xis.push_back(Character{g.coords_of(xi)});
    return xis;
}

std::vector<std::vector<cplx>> gaussian_vectors(std::int64_t d, std::int64_t count,
                                                std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<cplx>> xs(static_cast<std::size_t>(count),
                                      std::vector<cplx>(static_cast<std::size_t>(d)));
    for (auto& x : xs)
        for (cplx& z : x) z = rng.complex_gaussian();
    return xs;
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// --- transfer helpers ------------------------------------------------------

struct TransferSetup {
    Tower tower;
    BlockApproxResult approx;
    double c_system;
};

TransferSetup transfer_setup(std::int64_t base, std::int64_t depth, std::int64_t blocks,
                             const std::string& order, double eps) {
    Tower tower(base, depth);
    std::vector<std::int64_t> idx = order == "adversarial"
                                        ? adversarial_ordered_characters(tower, blocks)
                                        : walsh_ordered_characters(tower);
    std::vector<std::vector<cplx>> basis = character_basis(tower.group(), idx);
    std::vector<std::int64_t> targets;
    for (std::int64_t j = 1; j <= blocks; ++j) targets.push_back(j);
    BlockApproxResult approx = block_approximation(tower, basis, targets, eps);
    // The h-part is controlled by the crude triangle bound with unit-norm
    // approximants, which gives C = number of blocks; safe for every norm.
    return {std::move(tower), std::move(approx), static_cast<double>(blocks)};
}

} // namespace

std::vector<std::string> validate_sweep(const SweepConfig& cfg) {
    std::vector<std::string> errors;
    if (!kKinds.count(cfg.kind)) errors.push_back("unknown sweep kind '" + cfg.kind + "'");
    if (cfg.members.empty()) errors.push_back("no members");

    for (std::size_t i = 0; i < cfg.members.size(); ++i) {
        const MemberSpec& m = cfg.members[i];
        std::string ctx = "member " + std::to_string(i) + ": ";
        auto fail = [&](const std::string& msg) { errors.push_back(ctx + msg); };

        NormSpec spec = NormSpec::lp(2.0, 1);
        bool have_spec = false;
        try {
            spec = NormSpec::parse(m.norm);
            have_spec = true;
        } catch (const std::exception& e) {
            fail(e.what());
        }

        auto need_group = [&]() -> std::int64_t {
            try {
                return parse_group(m.group).cardinality();
            } catch (const std::exception& e) {
                fail(e.what());
                return -1;
            }
        };

        if (cfg.kind == "opnorm") {
            need_group();
            std::int64_t it = m.iterations > 0 ? m.iterations : cfg.iterations;
            std::int64_t rs = m.restarts > 0 ? m.restarts : cfg.restarts;
            if (it < 1 || rs < 1) fail("search budget must be positive");
        } else if (cfg.kind == "khinchin") {
            if (have_spec && m.vectors == "basis" && spec.dim() > 20)
                fail("exact enumeration capped at 20 vectors (basis of dimension " +
                     std::to_string(spec.dim()) + ")");
            if (m.vectors.empty()) fail("vectors must be 'basis' or a file path");
        } else if (cfg.kind == "charsys") {
            std::int64_t card = need_group();
            if (have_spec && card > 0 && m.vectors == "basis" && m.characters == "all" &&
                spec.dim() != card)
                fail("basis+all requires norm dimension == group cardinality (" +
                     std::to_string(spec.dim()) + " vs " + std::to_string(card) + ")");
        } else if (cfg.kind == "torus") {
            if (m.degree < 0) fail("degree must be >= 0");
            if (m.quad_points != 0 && m.quad_points < 4 * m.degree + 4)
                fail("quad_points below the floor 4*degree+4");
        } else if (cfg.kind == "transfer") {
            if (m.base != 2) fail("transfer members need base = 2");
            if (m.depth < 2 || m.depth > 11) fail("transfer depth must be in [2, 11]");
            if (m.blocks < 1 || m.blocks >= m.depth) fail("blocks must be in [1, depth)");
            if (m.eps < 0.0) fail("eps must be nonnegative");
            if (m.order != "walsh" && m.order != "adversarial")
                fail("order must be 'walsh' or 'adversarial'");
        }
    }
    return errors;
}

ConstantEstimate run_member(const SweepConfig& cfg, std::size_t index) {
    const MemberSpec& m = cfg.members.at(index);
    const std::uint64_t member_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(index));
    NormSpec spec = NormSpec::parse(m.norm);

    if (cfg.kind == "opnorm") {
        FiniteAbelianGroup g = parse_group(m.group);
        SearchBudget budget{m.iterations > 0 ? m.iterations : cfg.iterations,
                            m.restarts > 0 ? m.restarts : cfg.restarts};
        return operator_norm_lower(g, spec, budget, member_seed);
    }
    if (cfg.kind == "khinchin") {
        auto xs = resolve_vectors(m, spec.dim(), spec.dim());
        double r = khinchin_ratio_exact(spec, xs).max_ratio;
        ConstantEstimate est;
        est.constant = "khinchin_ratio";
        est.lower = est.upper = r;
        est.method = EstimateMethod::exact_enumeration;
        est.seed = member_seed;
        est.samples = std::int64_t{1} << xs.size();
        est.witness = nlohmann::json{{"vectors", vectors_to_json(xs)}};
        return est;
    }
    if (cfg.kind == "charsys") {
        FiniteAbelianGroup g = parse_group(m.group);
        auto xs = resolve_vectors(m, spec.dim(), g.cardinality());
        std::vector<Character> xis = m.characters == "all"
                                         ? all_characters(g)
                                         : characters_from_json(read_json_file(m.characters));
        double r = character_system_ratio(g, spec, xs, xis);
        if (r <= 0.0) throw std::invalid_argument("degenerate character system (ratio 0)");
        ConstantEstimate est;
        est.constant = "character_system_two_sided";
        est.lower = std::max(r, 1.0 / r);
        est.upper = std::numeric_limits<double>::infinity();
        est.method = EstimateMethod::exact_enumeration;
        est.seed = member_seed;
        est.samples = g.cardinality();
        est.witness = nlohmann::json{{"group", g.orders()},
                                     {"vectors", vectors_to_json(xs)},
                                     {"characters", characters_to_json(xis)},
                                     {"raw_ratio", r}};
        return est;
    }
    if (cfg.kind == "torus") {
        auto xs = resolve_vectors(m, spec.dim(), 2 * m.degree + 1);
        double value;
        std::int64_t points;
        if (m.quad_points > 0) {
            value = torus_partial_sum_ratio(spec, xs, m.quad_points);
            points = m.quad_points;
        } else {
            TorusQuadResult r = torus_partial_sum_auto(spec, xs);
            value = r.value;
            points = r.quad_points;
        }
        ConstantEstimate est;
        est.constant = "torus_partial_sum_ratio";
        est.lower = est.upper = value;
        est.method = EstimateMethod::analytic;
        est.seed = member_seed;
        est.samples = points;
        est.witness = nlohmann::json{{"vectors", vectors_to_json(xs)}, {"quad_points", points}};
        return est;
    }
    if (cfg.kind == "transfer") {
        TransferSetup setup = transfer_setup(m.base, m.depth, m.blocks, m.order, m.eps);
        auto xs = gaussian_vectors(spec.dim(), m.blocks, member_seed);
        TransferReport rep =
            transfer_inequality_check(spec, xs, setup.tower, setup.approx, m.eps, setup.c_system);
        ConstantEstimate est;
        est.constant = "rademacher_transfer";
        est.lower = rep.lhs / rep.sum_sq;
        est.upper = rep.rhs / rep.sum_sq;
        est.method = EstimateMethod::analytic;
        est.seed = member_seed;
        est.samples = setup.tower.cardinality();
        nlohmann::json block_errors = nlohmann::json::array();
        for (const auto& blk : setup.approx.blocks) block_errors.push_back(blk.error);
        est.witness = nlohmann::json{{"vectors", vectors_to_json(xs)},
                                     {"eps", m.eps},
                                     {"c_system", setup.c_system},
                                     {"order", m.order},
                                     {"base", m.base},
                                     {"depth", m.depth},
                                     {"blocks", m.blocks},
                                     {"block_errors", block_errors},
                                     {"bound_ok", rep.bound_ok}};
        return est;
    }
    throw std::invalid_argument("unknown sweep kind '" + cfg.kind + "'");
}

SweepReport run_sweep(const SweepConfig& cfg) {
    std::vector<std::string> problems = validate_sweep(cfg);
    if (!problems.empty()) {
        std::string joined;
        for (const auto& p : problems) {
            if (!joined.empty()) joined += "; ";
            joined += p;
        }
        throw std::invalid_argument("invalid sweep config: " + joined);
    }
    SweepReport report;
    report.config = cfg;
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < cfg.members.size(); ++i) {
        auto r0 = std::chrono::steady_clock::now();
        SweepRow row;
        row.member_id = static_cast<std::int64_t>(i);
        row.group = cfg.members[i].group;
        row.norm = cfg.members[i].norm;
        row.estimate = run_member(cfg, i);
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - r0)
                .count();
        report.rows.push_back(std::move(row));
    }
    report.total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string report_csv(const SweepReport& report) {
    std::string out = "member_id,group,norm,constant_name,lower,upper,method,seed,samples,runtime_ms\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.member_id);
        out += ',';
        out += csv_quote(row.group);
        out += ',';
        out += csv_quote(row.norm);
        out += ',';
        out += csv_quote(row.estimate.constant);
        out += ',';
        out += fmt_double(row.estimate.lower);
        out += ',';
        out += std::isinf(row.estimate.upper) ? "inf" : fmt_double(row.estimate.upper);
        out += ',';
        out += method_name(row.estimate.method);
        out += ',';
        out += std::to_string(row.estimate.seed);
        out += ',';
        out += std::to_string(row.estimate.samples);
        // runtime_ms intentionally empty: the CSV is byte-reproducible,
        // wall times go to the JSON report.
        out += ",\n";
    }
    return out;
}

nlohmann::json report_json(const SweepReport& report) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : report.config.members) {
        members.push_back({{"group", m.group},
                           {"norm", m.norm},
                           {"vectors", m.vectors},
                           {"characters", m.characters},
                           {"degree", m.degree},
                           {"quad_points", m.quad_points},
                           {"base", m.base},
                           {"depth", m.depth},
                           {"blocks", m.blocks},
                           {"eps", m.eps},
                           {"order", m.order},
                           {"iterations", m.iterations},
                           {"restarts", m.restarts}});
    }
    nlohmann::json results = nlohmann::json::array();
    nlohmann::json row_ms = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r = estimate_to_json(row.estimate, 0.0);
        r.erase("runtime_ms");
        r["member_id"] = row.member_id;
        r["group"] = row.group;
        r["norm"] = row.norm;
        results.push_back(std::move(r));
        row_ms.push_back(row.runtime_ms);
    }
    return {{"config",
             {{"kind", report.config.kind},
              {"seed", report.config.seed},
              {"iterations", report.config.iterations},
              {"restarts", report.config.restarts},
              {"members", std::move(members)}}},
            {"results", std::move(results)},
            {"runtime", {{"total_ms", report.total_ms}, {"row_ms", std::move(row_ms)}}}};
}

double evaluate_witness(const std::string& kind, const NormSpec& spec,
                        const nlohmann::json& witness) {
    if (kind == "opnorm") {
        VectorFunction f = vector_function_from_json(witness.at("input"));
        TransformPlan plan(f.group());
        return operator_norm_ratio(plan, spec, f);
    }
    if (kind == "khinchin") {
        return khinchin_ratio_exact(spec, vectors_from_json(witness.at("vectors"))).max_ratio;
    }
    if (kind == "charsys") {
        FiniteAbelianGroup g(witness.at("group").get<std::vector<std::int64_t>>());
        double r = character_system_ratio(g, spec, vectors_from_json(witness.at("vectors")),
                                          characters_from_json(witness.at("characters")));
        return std::max(r, 1.0 / r);
    }
    if (kind == "torus") {
        return torus_partial_sum_ratio(spec, vectors_from_json(witness.at("vectors")),
                                       witness.at("quad_points").get<std::int64_t>());
    }
    if (kind == "transfer") {
        TransferSetup setup = transfer_setup(
            witness.at("base").get<std::int64_t>(), witness.at("depth").get<std::int64_t>(),
            witness.at("blocks").get<std::int64_t>(), witness.at("order").get<std::string>(),
            witness.at("eps").get<double>());
        TransferReport rep =
            transfer_inequality_check(spec, vectors_from_json(witness.at("vectors")), setup.tower,
                                      setup.approx, witness.at("eps").get<double>(),
                                      witness.at("c_system").get<double>());
        return rep.lhs / rep.sum_sq;
    }
    throw std::invalid_argument("unknown sweep kind '" + kind + "'");
}

namespace {

struct DocReader {
    const tomlmini::Table& table;
    std::string ctx;
    std::vector<std::string>& errors;
    std::set<std::string> seen;

    const tomlmini::Value* find(const std::string& key) {
        seen.insert(key);
        auto it = table.find(key);
        return it == table.end() ? nullptr : &it->second;
    }
    std::string get_string(const std::string& key, const std::string& dflt) {
        const tomlmini::Value* v = find(key);
        if (!v) return dflt;
        if (!v->is_string()) {
            errors.push_back(ctx + key + " must be a string");
            return dflt;
        }
        return v->as_string();
    }
    std::int64_t get_int(const std::string& key, std::int64_t dflt) {
        const tomlmini::Value* v = find(key);
        if (!v) return dflt;
        if (!v->is_int()) {
            errors.push_back(ctx + key + " must be an integer");
            return dflt;
        }
        return v->as_int();
    }
    double get_float(const std::string& key, double dflt) {
        const tomlmini::Value* v = find(key);
        if (!v) return dflt;
        if (!v->is_int() && !v->is_float()) {
            errors.push_back(ctx + key + " must be a number");
            return dflt;
        }
        return v->as_float();
    }
    void finish() {
        for (const auto& [k, v] : table)
            if (!seen.count(k)) errors.push_back(ctx + "unknown key '" + k + "'");
    }
};

} // namespace

SweepConfig sweep_from_document(const tomlmini::Document& doc, std::vector<std::string>& errors) {
    SweepConfig cfg;
    DocReader root{doc.root, "", errors, {}};
    cfg.kind = root.get_string("kind", "");
    std::int64_t seed = root.get_int("seed", 0);
    if (seed < 0)
        errors.push_back("seed must be nonnegative");
    else
        cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.iterations = root.get_int("iterations", cfg.iterations);
    cfg.restarts = root.get_int("restarts", cfg.restarts);
    cfg.out_json = root.get_string("out_json", "");
    cfg.out_csv = root.get_string("out_csv", "");
    root.finish();

    for (const auto& [name, _] : doc.tables)
        errors.push_back("unknown section [" + name + "]");
    for (const auto& [name, tables] : doc.table_arrays) {
        if (name != "member") {
            errors.push_back("unknown section [[" + name + "]]");
            continue;
        }
        for (std::size_t i = 0; i < tables.size(); ++i) {
            DocReader r{tables[i], "member " + std::to_string(i) + ": ", errors, {}};
            MemberSpec m;
            m.group = r.get_string("group", "");
            m.norm = r.get_string("norm", "");
            m.vectors = r.get_string("vectors", m.vectors);
            m.characters = r.get_string("characters", m.characters);
            m.degree = r.get_int("degree", m.degree);
            m.quad_points = r.get_int("quad_points", m.quad_points);
            m.base = r.get_int("base", m.base);
            m.depth = r.get_int("depth", m.depth);
            m.blocks = r.get_int("blocks", m.blocks);
            m.eps = r.get_float("eps", m.eps);
            m.order = r.get_string("order", m.order);
            m.iterations = r.get_int("iterations", 0);
            m.restarts = r.get_int("restarts", 0);
            r.finish();
            cfg.members.push_back(std::move(m));
        }
    }
    return cfg;
}

SweepConfig parse_sweep_config(const std::string& text, std::vector<std::string>& errors) {
    std::vector<tomlmini::ParseError> perr;
    tomlmini::Document doc = tomlmini::parse(text, perr);
    for (const auto& e : perr)
        errors.push_back("line " + std::to_string(e.line) + ": " + e.message);
    return sweep_from_document(doc, errors);
}

tomlmini::Document sweep_to_document(const SweepConfig& cfg) {
    tomlmini::Document doc;
    doc.root["kind"] = tomlmini::Value{cfg.kind};
    doc.root["seed"] = tomlmini::Value{static_cast<std::int64_t>(cfg.seed)};
    doc.root["iterations"] = tomlmini::Value{cfg.iterations};
    doc.root["restarts"] = tomlmini::Value{cfg.restarts};
    if (!cfg.out_json.empty()) doc.root["out_json"] = tomlmini::Value{cfg.out_json};
    if (!cfg.out_csv.empty()) doc.root["out_csv"] = tomlmini::Value{cfg.out_csv};
    for (const auto& m : cfg.members) {
        tomlmini::Table t;
        t["group"] = tomlmini::Value{m.group};
        t["norm"] = tomlmini::Value{m.norm};
        t["vectors"] = tomlmini::Value{m.vectors};
        t["characters"] = tomlmini::Value{m.characters};
        t["degree"] = tomlmini::Value{m.degree};
        t["quad_points"] = tomlmini::Value{m.quad_points};
        t["base"] = tomlmini::Value{m.base};
        t["depth"] = tomlmini::Value{m.depth};
        t["blocks"] = tomlmini::Value{m.blocks};
        t["eps"] = tomlmini::Value{m.eps};
        t["order"] = tomlmini::Value{m.order};
        t["iterations"] = tomlmini::Value{m.iterations};
        t["restarts"] = tomlmini::Value{m.restarts};
        doc.table_arrays["member"].push_back(std::move(t));
    }
    return doc;
}

std::string serialize_sweep_config(const SweepConfig& cfg) {
    return tomlmini::serialize(sweep_to_document(cfg));
}

} // namespace normlab
