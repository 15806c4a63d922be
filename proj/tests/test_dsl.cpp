#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lech/runner.hpp"

using namespace lech;

namespace {

const char* kCuspFixture = R"(
field F(5);
ring R = F[x];
ring S = F[x, y] / (y^2 - x^3);
map f : R -> S sends x -> x;
check lech f;
)";

dsl::Document parse_ok(const std::string& text) {
    auto result = dsl::parse_fixture(text);
    if (auto* diag = std::get_if<dsl::Diagnostic>(&result)) FAIL(diag->to_string());
    return std::get<dsl::Document>(result);
}

dsl::Diagnostic parse_err(const std::string& text) {
    auto result = dsl::parse_fixture(text);
    REQUIRE(std::holds_alternative<dsl::Diagnostic>(result));
    return std::get<dsl::Diagnostic>(result);
}

} // namespace

TEST_CASE("parsing the five-statement example") {
    auto doc = parse_ok(kCuspFixture);
    REQUIRE(doc.statements.size() == 5);
    REQUIRE(std::holds_alternative<dsl::FieldDecl>(doc.statements[0]));
    REQUIRE(std::holds_alternative<dsl::MapDecl>(doc.statements[3]));
    REQUIRE(std::holds_alternative<dsl::CheckDecl>(doc.statements[4]));
}

TEST_CASE("parser accepts constructs that elaboration rejects") {
    // non-vanishing relation: parses, fails ring validation
    auto doc = parse_ok("field F(5); ring R = F[x] / (x^2 - 1);");
    REQUIRE_THROWS_AS(dsl::elaborate(doc, "t"), StructuralError);
    // non-local map: parses, fails map validation
    auto doc2 = parse_ok(
        "field F(5); ring R = F[x]; ring S = F[x]; map g : R -> S sends x -> x + 1;");
    REQUIRE_THROWS_AS(dsl::elaborate(doc2, "t"), StructuralError);
}

TEST_CASE("diagnostics carry position and expectations") {
    auto d1 = parse_err("field F(5); ring R = [x];");
    REQUIRE(d1.pos.line == 1);
    REQUIRE(d1.pos.col >= 20);
    REQUIRE(!d1.expected.empty());

    auto d2 = parse_err("check unknown_kind f;");
    bool has_lech = false;
    for (const auto& e : d2.expected) has_lech = has_lech || e == "lech";
    REQUIRE(has_lech);

    auto d3 = parse_err("ring R = F[x]\nideal I = (x) in R;");
    REQUIRE(d3.pos.line == 2);  // missing semicolon is noticed at the next token

    auto d4 = parse_err("map f : R -> S sends x -> ;");
    REQUIRE(!d4.expected.empty());
}

TEST_CASE("the parser is total on arbitrary bytes") {
    std::mt19937 rng(99);
    const std::string alphabet = "fierld rng()[]/^+-*,;:=->#xyz123 \n\t\"\\";
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        std::size_t len = rng() % 120;
        for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
        auto result = dsl::parse_fixture(text);  // must not crash or hang
        (void)result;
    }
}

TEST_CASE("pretty-print round trip") {
    const std::string inputs[] = {
        kCuspFixture,
        "field F(2, 2);\nring R = F[x, y] / (x*y - 1 + x^2, (x + y)^3);\n"
        "ideal I = (x^2, x*y) in R;\n",
        "field F(3); ring R = F[x]; ring S = F[x, u, v] / (u^2, u*v, v^2);\n"
        "map f : R -> S sends x -> x;\n"
        "check interchange f with sop (x + u, v) emax 2;\n"
        "check hk_sandwich S with ideal m emax 3;\n"
        "check adjunction S with vars 2;\n",
    };
    for (const std::string& text : inputs) {
        auto once = dsl::pretty_print(parse_ok(text));
        auto twice = dsl::pretty_print(parse_ok(once));
        REQUIRE(once == twice);
    }
}

TEST_CASE("duplicate declarations are rejected") {
    auto doc = parse_ok("field F(5); ring R = F[x]; ring R = F[x, y];");
    REQUIRE_THROWS_AS(dsl::elaborate(doc, "t"), ArgumentError);
    auto doc2 = parse_ok("field F(5); field F(7);");
    REQUIRE_THROWS_AS(dsl::elaborate(doc2, "t"), ArgumentError);
}

TEST_CASE("elaboration resolves objects and the maximal-ideal shorthand") {
    auto doc = parse_ok(kCuspFixture);
    auto fx = dsl::elaborate(doc, "cusp");
    REQUIRE(fx.rings.count("R") == 1);
    REQUIRE(fx.rings.count("S") == 1);
    REQUIRE(fx.maps.count("f") == 1);
    REQUIRE(fx.checks.size() == 1);
    Ideal m = fx.ideal_in("m", fx.ring("S"));
    REQUIRE(m.gens().size() == 2);
    REQUIRE_THROWS_AS(fx.ideal_in("nope", fx.ring("S")), ArgumentError);
    REQUIRE_THROWS_AS(fx.ring("T"), ArgumentError);
}

TEST_CASE("checks referencing later ideals still resolve") {
    auto doc = parse_ok(
        "field F(5); ring R = F[x];\n"
        "check hk_sandwich R with ideal J;\n"
        "ideal J = (x^2) in R;\n");
    auto fx = dsl::elaborate(doc, "t");
    RunOptions opts;
    auto report = run_fixtures({fx}, opts);
    REQUIRE(report.checks.size() == 1);
    REQUIRE(report.checks[0].verdict == Verdict::Pass);
}

TEST_CASE("run report is deterministic and schedule independent") {
    auto doc = parse_ok(
        "field F(2); ring R = F[x]; ring S = F[x, y] / (y^2 - x^3);\n"
        "map f : R -> S sends x -> x;\n"
        "check probe f; check lech f; check edim f; check hk_chain f;\n"
        "check interchange f with sop (x); check chi1 f with sop (x); check embdim f;\n");
    auto fx = dsl::elaborate(doc, "cusp");
    RunOptions opts;
    opts.seed = 7;
    auto a = to_json(run_fixtures({fx}, opts), /*include_timing=*/false).dump(2);
    auto b = to_json(run_fixtures({fx}, opts), /*include_timing=*/false).dump(2);
    REQUIRE(a == b);
    RunOptions wide = opts;
    wide.workers = 4;
    auto c = to_json(run_fixtures({fx}, wide), /*include_timing=*/false).dump(2);
    REQUIRE(a == c);
    RunOptions serial = opts;
    serial.workers = 1;
    auto d = to_json(run_fixtures({fx}, serial), /*include_timing=*/false).dump(2);
    REQUIRE(a == d);
}

TEST_CASE("flat-dependent checks fail with a message on non-flat maps") {
    // K[x,y] onto K[x,y]/(xy) by the identity assignments: valid local map,
    // finite fiber, but the probe rejects it
    auto doc = parse_ok(
        "field F(5); ring R = F[x, y]; ring S = F[x, y] / (x*y);\n"
        "map f : R -> S sends x -> x, y -> y;\n"
        "check probe f; check lech f; check edim f;\n");
    auto fx = dsl::elaborate(doc, "nonflat");
    RunOptions opts;
    auto report = run_fixtures({fx}, opts);
    REQUIRE(report.checks.size() == 3);
    REQUIRE(report.checks[0].check_id == "edim");
    REQUIRE(report.checks[0].verdict == Verdict::Pass);  // holds for finite flat dimension maps
    REQUIRE(report.checks[1].check_id == "lech");
    REQUIRE(report.checks[1].verdict == Verdict::Fail);
    REQUIRE(report.checks[1].notes.find("probe") != std::string::npos);
    REQUIRE(report.checks[2].check_id == "probe");
    REQUIRE(report.checks[2].verdict == Verdict::Fail);
    REQUIRE(exit_code(report) == 1);
}

TEST_CASE("check filter and exit codes") {
    auto doc = parse_ok(
        "field F(2); ring R = F[x]; ring S = F[x, y] / (y^2 - x^3);\n"
        "map f : R -> S sends x -> x;\n"
        "check lech f; check edim f;\n");
    auto fx = dsl::elaborate(doc, "cusp");
    RunOptions opts;
    opts.only = {"edim"};
    auto report = run_fixtures({fx}, opts);
    REQUIRE(report.checks.size() == 1);
    REQUIRE(report.checks[0].check_id == "edim");
    REQUIRE(exit_code(report) == 0);

    RunReport failing;
    CheckReport bad;
    bad.verdict = Verdict::Fail;
    failing.checks.push_back(bad);
    REQUIRE(exit_code(failing) == 1);
    RunReport capped;
    CheckReport inc;
    inc.verdict = Verdict::Inconclusive;
    capped.checks.push_back(inc);
    REQUIRE(exit_code(capped) == 2);
}

TEST_CASE("json reports are key-sorted with rationals as num/den strings") {
    auto doc = parse_ok(kCuspFixture);
    auto fx = dsl::elaborate(doc, "cusp");
    RunOptions opts;
    auto j = to_json(run_fixtures({fx}, opts));
    REQUIRE(j.contains("checks"));
    REQUIRE(j.contains("timing"));
    const auto& chk = j["checks"][0];
    REQUIRE(chk["check_id"] == "lech");
    REQUIRE(chk["lhs"] == "1/1");
    REQUIRE(chk["rhs"] == "2/1");
    // nlohmann objects iterate sorted by key
    std::string prev;
    for (auto it = chk.begin(); it != chk.end(); ++it) {
        REQUIRE(prev < it.key());
        prev = it.key();
    }
}
