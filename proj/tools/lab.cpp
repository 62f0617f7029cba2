#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "normlab/constants.hpp"
#include "normlab/fourier.hpp"
#include "normlab/serialize.hpp"
#include "normlab/sweep.hpp"
#include "normlab/tower.hpp"

namespace {

using namespace normlab;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_estimate(const ConstantEstimate& est, double runtime_ms, const std::string& out_path) {
    nlohmann::json j = estimate_to_json(est, runtime_ms);
    if (!out_path.empty()) write_json_file(out_path, j);
    std::cout << est.constant << ": lower=" << est.lower << " upper="
              << (std::isinf(est.upper) ? std::string("inf") : std::to_string(est.upper))
              << " method=" << method_name(est.method) << "\n";
}

// Runs a one-member family so single-shot commands and sweep rows share
// the exact same code path (and seeding rule).
int run_single(SweepConfig cfg, const std::string& out_path) {
    auto problems = validate_sweep(cfg);
    if (!problems.empty()) {
        for (const auto& p : problems) std::cout << "problem: " << p << "\n";
        return 1;
    }
    auto t0 = std::chrono::steady_clock::now();
    ConstantEstimate est = run_member(cfg, 0);
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit_estimate(est, ms, out_path);
    return 0;
}

std::string kind_of_constant(const std::string& constant) {
    if (constant == "fourier_operator_norm") return "opnorm";
    if (constant == "khinchin_ratio") return "khinchin";
    if (constant == "character_system_two_sided") return "charsys";
    if (constant == "torus_partial_sum_ratio") return "torus";
    if (constant == "rademacher_transfer") return "transfer";
    throw std::invalid_argument("unknown constant '" + constant + "' in report");
}

int cmd_validate(const std::string& path) {
    std::vector<std::string> errors;
    SweepConfig cfg = parse_sweep_config(slurp(path), errors);
    auto problems = validate_sweep(cfg);
    errors.insert(errors.end(), problems.begin(), problems.end());
    if (errors.empty()) {
        std::cout << "config OK: " << cfg.members.size() << " member(s), kind " << cfg.kind
                  << "\n";
        return 0;
    }
    for (const auto& e : errors) std::cout << "problem: " << e << "\n";
    return 1;
}

int cmd_run(const std::string& path) {
    std::vector<std::string> errors;
    SweepConfig cfg = parse_sweep_config(slurp(path), errors);
    auto problems = validate_sweep(cfg);
    errors.insert(errors.end(), problems.begin(), problems.end());
    for (const auto& e : errors) std::cout << "problem: " << e << "\n";
    if (!errors.empty()) return 1;
    SweepReport report = run_sweep(cfg);
    if (!cfg.out_json.empty()) write_json_file(cfg.out_json, report_json(report));
    if (!cfg.out_csv.empty()) {
        std::ofstream out(cfg.out_csv);
        if (!out) throw std::invalid_argument("cannot write '" + cfg.out_csv + "'");
        out << report_csv(report);
    }
    for (const auto& row : report.rows)
        std::cout << "member " << row.member_id << " [" << row.group << " " << row.norm
                  << "]: " << row.estimate.constant << " lower=" << row.estimate.lower << "\n";
    if (cfg.out_json.empty() && cfg.out_csv.empty()) std::cout << report_json(report).dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for vector-valued Fourier analysis on finite abelian groups"};
    app.require_subcommand(1);

    // ---- transform ----
    std::string tr_group, tr_in, tr_out;
    bool tr_naive = false, tr_inverse = false;
    auto* transform = app.add_subcommand("transform", "apply the Fourier transform to a function");
    transform->add_option("--group", tr_group, "group spec, e.g. Z8xZ4");
    transform->add_option("--in", tr_in, "input function JSON")->required();
    transform->add_option("--out", tr_out, "output function JSON")->required();
    transform->add_flag("--naive", tr_naive, "use the quadratic reference transform");
    transform->add_flag("--inverse", tr_inverse, "apply the inverse transform");

    // ---- constants ----
    auto* constants = app.add_subcommand("constants", "norm-constant experiments");
    constants->require_subcommand(1);

    std::string op_group, op_norm, op_out;
    std::uint64_t op_seed = 0;
    std::int64_t op_restarts = 32, op_iters = 200;
    auto* opnorm = constants->add_subcommand("opnorm", "transform operator norm lower bound");
    opnorm->add_option("--group", op_group)->required();
    opnorm->add_option("--norm", op_norm)->required();
    opnorm->add_option("--restarts", op_restarts);
    opnorm->add_option("--iters", op_iters);
    opnorm->add_option("--seed", op_seed);
    opnorm->add_option("--out", op_out);

    std::string kh_norm, kh_vectors = "basis", kh_out;
    auto* khinchin = constants->add_subcommand("khinchin", "exact Khinchin-type sign average");
    khinchin->add_option("--norm", kh_norm)->required();
    khinchin->add_option("--vectors", kh_vectors, "'basis' or vectors JSON file");
    khinchin->add_option("--out", kh_out);

    std::string cs_group, cs_norm, cs_vectors = "basis", cs_chars = "all", cs_out;
    auto* charsys = constants->add_subcommand("charsys", "character-system two-sided constant");
    charsys->add_option("--group", cs_group)->required();
    charsys->add_option("--norm", cs_norm)->required();
    charsys->add_option("--vectors", cs_vectors);
    charsys->add_option("--characters", cs_chars, "'all' or characters JSON file");
    charsys->add_option("--out", cs_out);

    std::string to_norm, to_vectors = "basis", to_out;
    std::int64_t to_degree = 1, to_points = 0;
    auto* torus = constants->add_subcommand("torus", "torus partial-sum ratio");
    torus->add_option("--norm", to_norm)->required();
    torus->add_option("--degree", to_degree);
    torus->add_option("--vectors", to_vectors);
    torus->add_option("--points", to_points, "quadrature points (0 = auto)");
    torus->add_option("--out", to_out);

    std::string sw_config;
    auto* sweep = constants->add_subcommand("sweep", "run a sweep config");
    sweep->add_option("--config", sw_config)->required();

    std::string rp_norm, rp_report;
    auto* replay = constants->add_subcommand("replay", "re-evaluate a report's witness");
    replay->add_option("--norm", rp_norm)->required();
    replay->add_option("--report", rp_report)->required();

    // ---- tower ----
    auto* tower = app.add_subcommand("tower", "profinite-tower experiments");
    tower->require_subcommand(1);

    std::int64_t rad_base = 2, rad_depth = 12, rad_index = 1;
    std::string rad_out;
    auto* rademacher = tower->add_subcommand("rademacher", "sample a Rademacher function");
    rademacher->add_option("--base", rad_base);
    rademacher->add_option("--depth", rad_depth);
    rademacher->add_option("--index", rad_index)->required();
    rademacher->add_option("--out", rad_out);

    std::string tf_norm, tf_order = "walsh", tf_out;
    std::int64_t tf_base = 2, tf_depth = 10, tf_blocks = 4;
    double tf_eps = 0.01;
    std::uint64_t tf_seed = 0;
    auto* transfer = tower->add_subcommand("transfer", "block-approximation transfer bound");
    transfer->add_option("--norm", tf_norm)->required();
    transfer->add_option("--eps", tf_eps);
    transfer->add_option("--seed", tf_seed);
    transfer->add_option("--base", tf_base);
    transfer->add_option("--depth", tf_depth);
    transfer->add_option("--blocks", tf_blocks);
    transfer->add_option("--order", tf_order, "walsh | adversarial");
    transfer->add_option("--out", tf_out);

    // ---- validate / run ----
    std::string val_path, run_path;
    auto* validate = app.add_subcommand("validate", "check a sweep config");
    validate->add_option("config", val_path)->required();
    auto* runcmd = app.add_subcommand("run", "validate and run a sweep config");
    runcmd->add_option("config", run_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*transform) {
            VectorFunction f = vector_function_from_json(read_json_file(tr_in));
            if (!tr_group.empty() && !parse_group(tr_group).same_shape(f.group()))
                throw std::invalid_argument("--group does not match the group in '" + tr_in + "'");
            TransformPlan plan(f.group(),
                               tr_naive ? TransformStrategy::naive : TransformStrategy::fast);
            write_json_file(tr_out, to_json(tr_inverse ? plan.idft(f) : plan.dft(f)));
            std::cout << "wrote " << tr_out << "\n";
            return 0;
        }
        if (*opnorm) {
            SweepConfig cfg;
            cfg.kind = "opnorm";
            cfg.seed = op_seed;
            cfg.iterations = op_iters;
            cfg.restarts = op_restarts;
            cfg.members.push_back({.group = op_group, .norm = op_norm});
            return run_single(std::move(cfg), op_out);
        }
        if (*khinchin) {
            SweepConfig cfg;
            cfg.kind = "khinchin";
            MemberSpec m;
            m.norm = kh_norm;
            m.vectors = kh_vectors;
            cfg.members.push_back(std::move(m));
            return run_single(std::move(cfg), kh_out);
        }
        if (*charsys) {
            SweepConfig cfg;
            cfg.kind = "charsys";
            MemberSpec m;
            m.group = cs_group;
            m.norm = cs_norm;
            m.vectors = cs_vectors;
            m.characters = cs_chars;
            cfg.members.push_back(std::move(m));
            return run_single(std::move(cfg), cs_out);
        }
        if (*torus) {
            SweepConfig cfg;
            cfg.kind = "torus";
            MemberSpec m;
            m.norm = to_norm;
            m.vectors = to_vectors;
            m.degree = to_degree;
            m.quad_points = to_points;
            cfg.members.push_back(std::move(m));
            return run_single(std::move(cfg), to_out);
        }
        if (*sweep) return cmd_run(sw_config);
        if (*replay) {
            nlohmann::json rep = read_json_file(rp_report);
            NormSpec spec = NormSpec::parse(rp_norm);
            std::string kind = kind_of_constant(rep.at("constant").get<std::string>());
            double reproduced = evaluate_witness(kind, spec, rep.at("witness"));
            double reported = rep.at("lower").get<double>();
            double diff = std::abs(reproduced - reported);
            std::cout << "reported=" << reported << " reproduced=" << reproduced
                      << " diff=" << diff << "\n";
            return diff <= 1e-9 * std::max(1.0, std::abs(reported)) ? 0 : 1;
        }
        if (*rademacher) {
            Tower tw(rad_base, rad_depth);
            std::vector<double> r = tw.rademacher(rad_index);
            nlohmann::json j{{"base", rad_base},
                             {"depth", rad_depth},
                             {"index", rad_index},
                             {"values", r}};
            if (!rad_out.empty()) write_json_file(rad_out, j);
            std::cout << "r_" << rad_index << " on " << group_to_string(tw.group()) << " ("
                      << r.size() << " points)\n";
            return 0;
        }
        if (*transfer) {
            SweepConfig cfg;
            cfg.kind = "transfer";
            cfg.seed = tf_seed;
            MemberSpec m;
            m.norm = tf_norm;
            m.base = tf_base;
            m.depth = tf_depth;
            m.blocks = tf_blocks;
            m.eps = tf_eps;
            m.order = tf_order;
            cfg.members.push_back(std::move(m));
            return run_single(std::move(cfg), tf_out);
        }
        if (*validate) return cmd_validate(val_path);
        if (*runcmd) return cmd_run(run_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
