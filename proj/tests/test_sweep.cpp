#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "normlab/group.hpp"
#include "normlab/norms.hpp"
#include "normlab/sweep.hpp"

using namespace normlab;

namespace {

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    for (const auto& p : problems)
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

SweepConfig khinchin_basis_config() {
    SweepConfig cfg;
    cfg.kind = "khinchin";
    cfg.seed = 5;
    MemberSpec m;
    m.norm = "lp:1:d=2";
    cfg.members.push_back(m);
    return cfg;
}

} // namespace

TEST_CASE("toml subset parser") {
    std::vector<tomlmini::ParseError> errors;
    std::string text =
        "kind = \"opnorm\"  # trailing comment\n"
        "seed = 42\n"
        "ratio = 1.5\n"
        "flag = true\n"
        "tags = [1, 2.5, \"x#y\"]\n"
        "\n"
        "[limits]\n"
        "cap = 16\n"
        "\n"
        "[[member]]\n"
        "group = \"Z4\"\n"
        "[[member]]\n"
        "group = \"Z8\"\n";
    tomlmini::Document doc = tomlmini::parse(text, errors);
    CHECK(errors.empty());
    CHECK(doc.root.at("kind").as_string() == "opnorm");
    CHECK(doc.root.at("seed").as_int() == 42);
    CHECK(doc.root.at("ratio").as_float() == 1.5);
    CHECK(doc.root.at("flag").as_bool());
    const auto& tags = doc.root.at("tags").as_array();
    REQUIRE(tags.size() == 3);
    CHECK(tags[0].as_int() == 1);
    CHECK(tags[1].as_float() == 2.5);
    CHECK(tags[2].as_string() == "x#y"); // '#' inside quotes is not a comment
    CHECK(doc.tables.at("limits").at("cap").as_int() == 16);
    REQUIRE(doc.table_arrays.at("member").size() == 2);
    CHECK(doc.table_arrays.at("member")[1].at("group").as_string() == "Z8");

    // Integer-for-float coercion.
    CHECK(doc.root.at("seed").as_float() == 42.0);
}

TEST_CASE("toml parser reports line numbers and continues") {
    std::vector<tomlmini::ParseError> errors;
    std::string text =
        "good = 1\n"
        "= broken\n"
        "also_good = 2\n"
        "dangling [\n";
    tomlmini::Document doc = tomlmini::parse(text, errors);
    REQUIRE(errors.size() == 2);
    CHECK(errors[0].line == 2);
    CHECK(errors[1].line == 4);
    CHECK(doc.root.at("good").as_int() == 1);
    CHECK(doc.root.at("also_good").as_int() == 2);
}

TEST_CASE("toml serialize round trip") {
    tomlmini::Document doc;
    doc.root["kind"] = tomlmini::Value{std::string("torus")};
    doc.root["seed"] = tomlmini::Value{std::int64_t{9}};
    doc.root["eps"] = tomlmini::Value{0.25};
    doc.root["on"] = tomlmini::Value{true};
    tomlmini::Table m;
    m["norm"] = tomlmini::Value{std::string("lp:1:d=2")};
    m["degree"] = tomlmini::Value{std::int64_t{3}};
    doc.table_arrays["member"].push_back(m);

    std::string text = tomlmini::serialize(doc);
    std::vector<tomlmini::ParseError> errors;
    tomlmini::Document back = tomlmini::parse(text, errors);
    CHECK(errors.empty());
    CHECK(back.root.at("kind").as_string() == "torus");
    CHECK(back.root.at("seed").as_int() == 9);
    CHECK(back.root.at("eps").as_float() == 0.25);
    CHECK(back.root.at("on").as_bool());
    CHECK(back.table_arrays.at("member")[0].at("degree").as_int() == 3);
}

TEST_CASE("sweep config parse and serialize round trip") {
    std::vector<std::string> errors;
    std::string text =
        "kind = \"opnorm\"\n"
        "seed = 11\n"
        "iterations = 50\n"
        "restarts = 4\n"
        "\n"
        "[[member]]\n"
        "group = \"Z4\"\n"
        "norm = \"lp:1.5:d=2\"\n"
        "\n"
        "[[member]]\n"
        "group = \"Z2xZ3\"\n"
        "norm = \"linf:d=3\"\n"
        "iterations = 80\n";
    SweepConfig cfg = parse_sweep_config(text, errors);
    CHECK(errors.empty());
    CHECK(cfg.kind == "opnorm");
    CHECK(cfg.seed == 11);
    CHECK(cfg.iterations == 50);
    REQUIRE(cfg.members.size() == 2);
    CHECK(cfg.members[1].group == "Z2xZ3");
    CHECK(cfg.members[1].iterations == 80);
    CHECK(validate_sweep(cfg).empty());

    std::vector<std::string> errors2;
    SweepConfig back = parse_sweep_config(serialize_sweep_config(cfg), errors2);
    CHECK(errors2.empty());
    CHECK(back == cfg);
}

TEST_CASE("config errors are caught with context") {
    std::vector<std::string> errors;
    parse_sweep_config("kind = \"opnorm\"\nbogus = 1\n[[member]]\nnorms = \"lp:2:d=2\"\n", errors);
    CHECK(mentions(errors, "unknown key 'bogus'"));
    CHECK(mentions(errors, "member 0"));
    CHECK(mentions(errors, "unknown key 'norms'"));

    std::vector<std::string> errors2;
    parse_sweep_config("kind = \"opnorm\"\n[extra]\nx = 1\n", errors2);
    CHECK(mentions(errors2, "unknown section [extra]"));
}

TEST_CASE("validate_sweep rejects bad members") {
    SweepConfig cfg;
    cfg.kind = "warp";
    CHECK(mentions(validate_sweep(cfg), "unknown sweep kind"));

    cfg.kind = "opnorm";
    CHECK(mentions(validate_sweep(cfg), "no members"));

    MemberSpec m;
    m.group = "Z4";
    m.norm = "lp:0.5:d=2";
    cfg.members = {m};
    CHECK(mentions(validate_sweep(cfg), "member 0"));
    CHECK(mentions(validate_sweep(cfg), "p >= 1"));

    cfg.members[0].norm = "lp:2:d=2";
    cfg.members[0].group = "Z2097152"; // 2^21, over the default cap
    CHECK(mentions(validate_sweep(cfg), "cap"));

    cfg.members[0].group = "Z4";
    cfg.iterations = 0;
    CHECK(!validate_sweep(cfg).empty());
    cfg.iterations = 10;
    CHECK(validate_sweep(cfg).empty());

    // charsys: with basis vectors and all characters, dim must equal |G|.
    SweepConfig cs;
    cs.kind = "charsys";
    MemberSpec cm;
    cm.group = "Z4";
    cm.norm = "lp:2:d=3";
    cs.members = {cm};
    CHECK(!validate_sweep(cs).empty());
    cs.members[0].norm = "lp:2:d=4";
    CHECK(validate_sweep(cs).empty());

    // khinchin: basis enumeration needs dim <= 20.
    SweepConfig kh;
    kh.kind = "khinchin";
    MemberSpec km;
    km.norm = "lp:1:d=21";
    kh.members = {km};
    CHECK(!validate_sweep(kh).empty());

    // transfer: base-2 towers, sane depth/blocks/eps/order.
    SweepConfig tr;
    tr.kind = "transfer";
    MemberSpec tm;
    tm.norm = "lp:1:d=4";
    tr.members = {tm};
    CHECK(validate_sweep(tr).empty());
    tr.members[0].base = 3;
    CHECK(!validate_sweep(tr).empty());
    tr.members[0].base = 2;
    tr.members[0].blocks = 10; // = depth, must be < depth
    CHECK(!validate_sweep(tr).empty());
    tr.members[0].blocks = 4;
    tr.members[0].eps = -0.1;
    CHECK(!validate_sweep(tr).empty());
    tr.members[0].eps = 0.01;
    tr.members[0].order = "sorted";
    CHECK(!validate_sweep(tr).empty());

    // torus: quadrature floor when pinned.
    SweepConfig to;
    to.kind = "torus";
    MemberSpec om;
    om.norm = "lp:1:d=2";
    om.degree = 4;
    om.quad_points = 10; // below 4n+4 = 20
    to.members = {om};
    CHECK(mentions(validate_sweep(to), "member 0"));
    to.members[0].quad_points = 0;
    CHECK(validate_sweep(to).empty());
}

TEST_CASE("khinchin sweep row reproduces the enumeration oracle") {
    SweepConfig cfg = khinchin_basis_config();
    SweepReport rep = run_sweep(cfg);
    REQUIRE(rep.rows.size() == 1);
    const ConstantEstimate& est = rep.rows[0].estimate;
    CHECK(est.constant == "khinchin_ratio");
    CHECK(est.lower == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(est.upper == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(est.samples == 4);
    CHECK(est.method == EstimateMethod::exact_enumeration);
}

TEST_CASE("opnorm sweep stays under the universal bound") {
    SweepConfig cfg;
    cfg.kind = "opnorm";
    cfg.seed = 3;
    cfg.iterations = 25;
    cfg.restarts = 3;
    for (const char* g : {"Z2", "Z4", "Z2xZ3"}) {
        MemberSpec m;
        m.group = g;
        m.norm = "lp:1:d=2";
        cfg.members.push_back(m);
    }
    MemberSpec h;
    h.group = "Z8";
    h.norm = "hilbert:d=2";
    cfg.members.push_back(h);

    SweepReport rep = run_sweep(cfg);
    REQUIRE(rep.rows.size() == 4);
    for (const auto& row : rep.rows) {
        double bound = std::sqrt(static_cast<double>(parse_group(row.group).cardinality()));
        CHECK(row.estimate.lower <= bound + 1e-9);
        CHECK(row.estimate.upper == doctest::Approx(bound).epsilon(1e-12));
    }
    CHECK(std::abs(rep.rows[3].estimate.lower - 1.0) <= 1e-9); // hilbert member
}

TEST_CASE("charsys sweep: two-sided constant grows on linf, flat on l2") {
    double prev = 0.0;
    for (std::int64_t m = 1; m <= 4; ++m) {
        std::int64_t dim = std::int64_t{1} << m;
        SweepConfig cfg;
        cfg.kind = "charsys";
        MemberSpec mem;
        mem.group = "Z" + std::to_string(dim);
        mem.norm = "linf:d=" + std::to_string(dim);
        cfg.members = {mem};
        SweepReport rep = run_sweep(cfg);
        REQUIRE(rep.rows.size() == 1);
        const ConstantEstimate& est = rep.rows[0].estimate;
        CHECK(est.constant == "character_system_two_sided");
        CHECK(est.lower > prev); // strictly increasing in m
        prev = est.lower;

        SweepConfig flat = cfg;
        flat.members[0].norm = "lp:2:d=" + std::to_string(dim);
        SweepReport frep = run_sweep(flat);
        CHECK(std::abs(frep.rows[0].estimate.lower - 1.0) <= 1e-9);
    }
    CHECK(prev == doctest::Approx(16.0).epsilon(1e-12)); // Z/16: ratio 1/16 two-sided
}

TEST_CASE("torus sweep row matches the frozen quadrature value") {
    SweepConfig cfg;
    cfg.kind = "torus";
    MemberSpec m;
    m.norm = "lp:1:d=2";
    m.degree = 1;
    m.quad_points = 4096;
    cfg.members = {m};
    SweepReport rep = run_sweep(cfg);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].estimate.lower == doctest::Approx(1.848826196709).epsilon(1e-9));
    CHECK(rep.rows[0].estimate.samples == 4096);
}

TEST_CASE("transfer sweep rows carry a verified bound") {
    SweepConfig cfg;
    cfg.kind = "transfer";
    cfg.seed = 99;
    MemberSpec m;
    m.norm = "lp:1:d=3";
    m.depth = 10;
    m.blocks = 4;
    m.eps = 0.01;
    for (const char* order : {"walsh", "adversarial"}) {
        m.order = order;
        cfg.members = {m};
        SweepReport rep = run_sweep(cfg);
        REQUIRE(rep.rows.size() == 1);
        const ConstantEstimate& est = rep.rows[0].estimate;
        CHECK(est.constant == "rademacher_transfer");
        CHECK(est.lower <= est.upper);
        CHECK(est.witness.at("bound_ok").get<bool>());
        CHECK(est.witness.at("order").get<std::string>() == order);
    }
}

TEST_CASE("csv report shape and determinism") {
    SweepConfig cfg = khinchin_basis_config();
    cfg.members[0].norm = "wlp:2:w=1,2"; // comma forces CSV quoting
    SweepReport rep1 = run_sweep(cfg);
    SweepReport rep2 = run_sweep(cfg);
    std::string csv1 = report_csv(rep1);
    std::string csv2 = report_csv(rep2);
    CHECK(csv1 == csv2); // byte-identical despite different wall times

    CHECK(csv1.rfind("member_id,group,norm,constant_name,lower,upper,method,seed,samples,runtime_ms\n",
                     0) == 0);
    CHECK(csv1.find("\"wlp:2:w=1,2\"") != std::string::npos);
    // runtime_ms column stays empty for reproducibility.
    CHECK(csv1.back() == '\n');
    CHECK(csv1[csv1.size() - 2] == ',');

    // Infinite upper bounds are spelled "inf".
    SweepConfig op;
    op.kind = "charsys";
    MemberSpec cm;
    cm.group = "Z2";
    cm.norm = "linf:d=2";
    op.members = {cm};
    std::string ocsv = report_csv(run_sweep(op));
    CHECK(ocsv.find(",inf,") != std::string::npos);
}

TEST_CASE("json report segregates runtime") {
    SweepConfig cfg = khinchin_basis_config();
    nlohmann::json j1 = report_json(run_sweep(cfg));
    nlohmann::json j2 = report_json(run_sweep(cfg));
    CHECK(j1.contains("runtime"));
    CHECK(j1.at("runtime").contains("total_ms"));
    CHECK(j1.at("config").at("kind") == "khinchin");
    REQUIRE(j1.at("results").size() == 1);
    CHECK(!j1.at("results")[0].contains("runtime_ms"));
    j1.erase("runtime");
    j2.erase("runtime");
    CHECK(j1 == j2);
}

TEST_CASE("witnesses replay through evaluate_witness") {
    // opnorm.
    SweepConfig op;
    op.kind = "opnorm";
    op.seed = 17;
    op.iterations = 30;
    op.restarts = 3;
    MemberSpec om;
    om.group = "Z2xZ3";
    om.norm = "lp:1.5:d=2";
    op.members = {om};
    SweepReport orep = run_sweep(op);
    const ConstantEstimate& oe = orep.rows[0].estimate;
    CHECK(evaluate_witness("opnorm", NormSpec::parse(om.norm), oe.witness) ==
          doctest::Approx(oe.lower).epsilon(1e-9));

    // khinchin.
    SweepConfig kh = khinchin_basis_config();
    SweepReport krep = run_sweep(kh);
    CHECK(evaluate_witness("khinchin", NormSpec::parse("lp:1:d=2"),
                           krep.rows[0].estimate.witness) ==
          doctest::Approx(krep.rows[0].estimate.lower).epsilon(1e-12));

    // charsys.
    SweepConfig cs;
    cs.kind = "charsys";
    MemberSpec cm;
    cm.group = "Z4";
    cm.norm = "linf:d=4";
    cs.members = {cm};
    SweepReport crep = run_sweep(cs);
    CHECK(evaluate_witness("charsys", NormSpec::parse(cm.norm), crep.rows[0].estimate.witness) ==
          doctest::Approx(crep.rows[0].estimate.lower).epsilon(1e-9));

    // torus.
    SweepConfig to;
    to.kind = "torus";
    MemberSpec tm;
    tm.norm = "lp:1:d=2";
    tm.quad_points = 1024;
    to.members = {tm};
    SweepReport trep = run_sweep(to);
    CHECK(evaluate_witness("torus", NormSpec::parse(tm.norm), trep.rows[0].estimate.witness) ==
          doctest::Approx(trep.rows[0].estimate.lower).epsilon(1e-12));

    // transfer.
    SweepConfig tr;
    tr.kind = "transfer";
    tr.seed = 4;
    MemberSpec rm;
    rm.norm = "lp:1:d=2";
    tr.members = {rm};
    SweepReport rrep = run_sweep(tr);
    CHECK(evaluate_witness("transfer", NormSpec::parse(rm.norm), rrep.rows[0].estimate.witness) ==
          doctest::Approx(rrep.rows[0].estimate.lower).epsilon(1e-9));
}

TEST_CASE("run_sweep throws on invalid configs") {
    SweepConfig cfg;
    cfg.kind = "opnorm"; // no members
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg.members.push_back(MemberSpec{});
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument); // empty group/norm
}
