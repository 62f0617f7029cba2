#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "normlab/fourier.hpp"
#include "normlab/rng.hpp"
#include "normlab/serialize.hpp"

using namespace normlab;

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the lab binary with shell redirection and captures exit code/stdout/stderr.
CmdResult run_lab(const std::string& args) {
    const std::string out_path = "cli_tmp_stdout.txt";
    const std::string err_path = "cli_tmp_stderr.txt";
    std::string cmd = std::string(LAB_BIN) + " " + args + " >" + out_path + " 2>" + err_path;
    int rc = std::system(cmd.c_str());
    CmdResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

VectorFunction random_function(const FiniteAbelianGroup& g, std::int64_t d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> values(static_cast<std::size_t>(g.cardinality() * d));
    for (cplx& z : values) z = rng.complex_gaussian();
    return VectorFunction(g, d, std::move(values));
}

double max_diff(const VectorFunction& a, const VectorFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

struct TmpFiles {
    std::vector<std::string> paths;
    std::string add(std::string p) {
        paths.push_back(p);
        return p;
    }
    ~TmpFiles() {
        for (const auto& p : paths) std::filesystem::remove(p);
    }
};

} // namespace

TEST_CASE("transform round trips through the CLI") {
    TmpFiles tmp;
    FiniteAbelianGroup g({4, 3});
    VectorFunction f = random_function(g, 2, 71);
    std::string in = tmp.add("cli_tmp_f.json");
    std::string fwd = tmp.add("cli_tmp_fhat.json");
    std::string back = tmp.add("cli_tmp_back.json");
    std::string naive = tmp.add("cli_tmp_naive.json");
    write_json_file(in, to_json(f));

    CmdResult r = run_lab("transform --group Z4xZ3 --in " + in + " --out " + fwd);
    CHECK(r.code == 0);
    CHECK(r.out.find("wrote " + fwd) != std::string::npos);

    TransformPlan plan(g);
    VectorFunction fhat = vector_function_from_json(read_json_file(fwd));
    CHECK(max_diff(fhat, plan.dft(f)) <= 1e-12);

    CHECK(run_lab("transform --inverse --in " + fwd + " --out " + back).code == 0);
    VectorFunction f2 = vector_function_from_json(read_json_file(back));
    CHECK(max_diff(f2, f) <= 1e-10);

    CHECK(run_lab("transform --naive --in " + in + " --out " + naive).code == 0);
    VectorFunction fhat_naive = vector_function_from_json(read_json_file(naive));
    CHECK(max_diff(fhat_naive, fhat) <= 1e-10);
}

TEST_CASE("transform rejects a mismatched --group") {
    TmpFiles tmp;
    FiniteAbelianGroup g({4});
    std::string in = tmp.add("cli_tmp_g.json");
    std::string out = tmp.add("cli_tmp_gout.json");
    write_json_file(in, to_json(random_function(g, 1, 5)));

    CmdResult r = run_lab("transform --group Z5 --in " + in + " --out " + out);
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(!std::filesystem::exists(out));
}

TEST_CASE("constants khinchin emits a replayable report") {
    TmpFiles tmp;
    std::string rep = tmp.add("cli_tmp_kh.json");
    CmdResult r = run_lab("constants khinchin --norm lp:1:d=2 --out " + rep);
    CHECK(r.code == 0);
    CHECK(r.out.find("khinchin_ratio: lower=2") != std::string::npos);

    nlohmann::json j = read_json_file(rep);
    CHECK(j.at("constant") == "khinchin_ratio");
    CHECK(j.at("lower").get<double>() == 2.0);
    CHECK(j.at("upper").get<double>() == 2.0);
    CHECK(j.at("method") == "exact-enumeration");
    CHECK(j.at("samples").get<std::int64_t>() == 4);
    CHECK(j.contains("witness"));
    CHECK(j.contains("runtime_ms"));

    CmdResult replay = run_lab("constants replay --norm lp:1:d=2 --report " + rep);
    CHECK(replay.code == 0);
    CHECK(replay.out.find("diff=") != std::string::npos);

    // Tampered report: replay must fail.
    j["lower"] = 1.75;
    write_json_file(rep, j);
    CHECK(run_lab("constants replay --norm lp:1:d=2 --report " + rep).code == 1);
}

TEST_CASE("constants opnorm on a hilbert norm pins the constant at 1") {
    TmpFiles tmp;
    std::string rep = tmp.add("cli_tmp_op.json");
    CmdResult r = run_lab(
        "constants opnorm --group Z4 --norm hilbert:d=2 --iters 5 --restarts 2 --seed 7 --out " +
        rep);
    CHECK(r.code == 0);
    nlohmann::json j = read_json_file(rep);
    CHECK(std::abs(j.at("lower").get<double>() - 1.0) <= 1e-9);
    CHECK(j.at("upper").get<double>() == 2.0); // sqrt(|Z4|)

    CmdResult replay = run_lab("constants replay --norm hilbert:d=2 --report " + rep);
    CHECK(replay.code == 0);
}

TEST_CASE("constants charsys prints a two-sided constant with infinite upper") {
    CmdResult r = run_lab("constants charsys --group Z2 --norm linf:d=2");
    CHECK(r.code == 0);
    CHECK(r.out.find("character_system_two_sided: lower=2") != std::string::npos);
    CHECK(r.out.find("upper=inf") != std::string::npos);
}

TEST_CASE("constants torus validates the quadrature floor") {
    CmdResult bad = run_lab("constants torus --norm lp:1:d=2 --degree 1 --points 7");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("problem:") != std::string::npos);

    CmdResult good = run_lab("constants torus --norm lp:2:d=2 --degree 1 --points 8");
    CHECK(good.code == 0);
    CHECK(good.out.find("torus_partial_sum_ratio: lower=1") != std::string::npos);
}

TEST_CASE("validate reports problems and reflects them in the exit status") {
    TmpFiles tmp;
    std::string good = tmp.add("cli_tmp_good.toml");
    write_text(good,
               "kind = \"khinchin\"\n"
               "[[member]]\n"
               "norm = \"lp:1:d=2\"\n");
    CmdResult ok = run_lab("validate " + good);
    CHECK(ok.code == 0);
    CHECK(ok.out.find("config OK: 1 member(s), kind khinchin") != std::string::npos);

    std::string bad = tmp.add("cli_tmp_bad.toml");
    write_text(bad,
               "kind = \"opnorm\"\n"
               "[[member]]\n"
               "group = \"Z4\"\n"
               "norm = \"lp:0.5:d=2\"\n");
    CmdResult fail = run_lab("validate " + bad);
    CHECK(fail.code == 1);
    CHECK(fail.out.find("problem:") != std::string::npos);
    CHECK(fail.out.find("p >= 1") != std::string::npos);

    std::string syntax = tmp.add("cli_tmp_syntax.toml");
    write_text(syntax, "= 5\n");
    CmdResult serr = run_lab("validate " + syntax);
    CHECK(serr.code == 1);
    CHECK(serr.out.find("line 1:") != std::string::npos);

    CHECK(run_lab("validate cli_tmp_missing.toml").code == 1);
}

TEST_CASE("run executes a config and writes byte-identical CSV on rerun") {
    TmpFiles tmp;
    std::string csv_a = tmp.add("cli_tmp_a.csv");
    std::string csv_b = tmp.add("cli_tmp_b.csv");
    std::string json_a = tmp.add("cli_tmp_a.json");
    auto config_text = [](const std::string& csv, const std::string& json) {
        return "kind = \"opnorm\"\n"
               "seed = 13\n"
               "iterations = 20\n"
               "restarts = 2\n"
               "out_csv = \"" + csv + "\"\n" +
               (json.empty() ? std::string() : "out_json = \"" + json + "\"\n") +
               "\n"
               "[[member]]\n"
               "group = \"Z4\"\n"
               "norm = \"lp:1.5:d=2\"\n"
               "\n"
               "[[member]]\n"
               "group = \"Z2xZ3\"\n"
               "norm = \"hilbert:d=2\"\n";
    };
    std::string cfg_a = tmp.add("cli_tmp_cfg_a.toml");
    std::string cfg_b = tmp.add("cli_tmp_cfg_b.toml");
    write_text(cfg_a, config_text(csv_a, json_a));
    write_text(cfg_b, config_text(csv_b, ""));

    CmdResult ra = run_lab("run " + cfg_a);
    CHECK(ra.code == 0);
    CHECK(ra.out.find("member 0 [Z4 lp:1.5:d=2]") != std::string::npos);
    CHECK(ra.out.find("member 1 [Z2xZ3 hilbert:d=2]") != std::string::npos);
    CHECK(run_lab("run " + cfg_b).code == 0);

    std::string bytes_a = slurp(csv_a);
    std::string bytes_b = slurp(csv_b);
    CHECK(!bytes_a.empty());
    CHECK(bytes_a == bytes_b);
    CHECK(bytes_a.rfind("member_id,group,norm,", 0) == 0);

    nlohmann::json j = read_json_file(json_a);
    CHECK(j.at("config").at("seed").get<std::uint64_t>() == 13);
    CHECK(j.at("results").size() == 2);
    CHECK(j.contains("runtime"));

    // Invalid config comes back as problems, not a crash.
    std::string cfg_bad = tmp.add("cli_tmp_cfg_bad.toml");
    write_text(cfg_bad, "kind = \"opnorm\"\n");
    CmdResult rb = run_lab("run " + cfg_bad);
    CHECK(rb.code == 1);
    CHECK(rb.out.find("problem:") != std::string::npos);
}

TEST_CASE("tower rademacher writes samples") {
    TmpFiles tmp;
    std::string out = tmp.add("cli_tmp_rad.json");
    CmdResult r = run_lab("tower rademacher --base 2 --depth 3 --index 1 --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("r_1 on Z8 (8 points)") != std::string::npos);
    nlohmann::json j = read_json_file(out);
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    REQUIRE(values.size() == 8);
    for (std::size_t t = 0; t < 8; ++t) CHECK(values[t] == (t < 4 ? 1.0 : -1.0));

    CmdResult bad = run_lab("tower rademacher --base 2 --depth 3 --index 9");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("tower transfer reports a verified bound") {
    TmpFiles tmp;
    std::string out = tmp.add("cli_tmp_tr.json");
    CmdResult r = run_lab(
        "tower transfer --norm lp:1:d=2 --depth 8 --blocks 3 --eps 0.01 --order adversarial "
        "--seed 2 --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("rademacher_transfer: lower=") != std::string::npos);
    nlohmann::json j = read_json_file(out);
    CHECK(j.at("witness").at("bound_ok").get<bool>());
    CHECK(j.at("lower").get<double>() <= j.at("upper").get<double>());

    CmdResult bad = run_lab("tower transfer --norm lp:1:d=2 --order sorted");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("problem:") != std::string::npos);
}

TEST_CASE("top-level usage errors") {
    CHECK(run_lab("").code != 0);
    CHECK(run_lab("frobnicate").code != 0);
    CmdResult help = run_lab("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("transform") != std::string::npos);
}
