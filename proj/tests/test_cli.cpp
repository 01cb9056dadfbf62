#include "commands.hpp"

#include "stablecat/error.hpp"

#include <doctest.h>

using namespace stablecat;
using namespace stablecat::cli;

namespace {

std::string bundled(const std::string &name) { return std::string(STABLECAT_WORKSPACES) + "/" + name; }

std::string error_of(const std::string &text)
{
    try {
        parse_workspace(text, "inline");
    } catch (const workspace_error &e) {
        return e.what();
    }
    return {};
}

CommandResult run(const Workspace &ws, CommandArgs a) { return run_command(ws, a); }

const json &check(const json &report, const std::string &id)
{
    for (const auto &c : report.at("checks"))
        if (c.at("id") == id) return c;
    throw std::runtime_error("no check " + id);
}

}

TEST_CASE("bundled A2 workspace loads with three modules")
{
    Workspace ws = load_workspace(bundled("a2.json"));
    CHECK(ws.modules.size() == 3);
    CHECK(ws.field.characteristic() == 2);
    CHECK(ws.triples.size() == 2);
    CHECK(ws.chains.size() == 1);
}

TEST_CASE("load errors name the problem")
{
    CHECK(error_of(R"({"field": {"characteristic": 4}, "algebras": [], "modules": []})").find("characteristic must be prime") !=
          std::string::npos);

    const std::string unresolved = R"({"field": 2,
        "algebras": [{"name": "A", "truncated_polynomial": 2}],
        "modules": [{"name": "K", "algebra": "A", "x": [[0]]}],
        "subcategories": [{"name": "Z", "objects": ["K", "M9"]}]})";
    std::string e = error_of(unresolved);
    CHECK(e.find("M9") != std::string::npos);
    CHECK(e.find("subcategory 'Z'") != std::string::npos);

    std::string p = error_of("{\"field\": 2,\n  \"algebras\": [ oops ]}");
    CHECK(p.find("line 2") != std::string::npos);

    std::string bad_action = error_of(R"({"field": 2,
        "algebras": [{"name": "A", "truncated_polynomial": 2}],
        "modules": [{"name": "N", "algebra": "A", "x": [[1]]}]})");
    CHECK(bad_action.find("module 'N'") != std::string::npos);

    CHECK_THROWS_AS(load_workspace(bundled("missing.json")), workspace_error);
}

TEST_CASE("seed priority is flag, file, environment, default")
{
    const std::string with_seed = R"({"field": 2, "algebras": [], "modules": [], "seed": 7})";
    const std::string without = R"({"field": 2, "algebras": [], "modules": []})";
    CHECK(parse_workspace(with_seed, "s", {std::uint64_t(3), std::uint64_t(5), std::nullopt}).budget.seed == 3);
    CHECK(parse_workspace(with_seed, "s", {std::nullopt, std::uint64_t(5), std::nullopt}).budget.seed == 7);
    CHECK(parse_workspace(without, "s", {std::nullopt, std::uint64_t(5), std::nullopt}).budget.seed == 5);
    CHECK(parse_workspace(without, "s").budget.seed == 1);

    Workspace b = parse_workspace(without, "s", {std::nullopt, std::nullopt, std::uint64_t(99)});
    CHECK(b.budget.enumeration_limit == 99);
    CHECK(b.budget.search_limit == 99);
}

TEST_CASE("shift of K over A2 is K")
{
    Workspace ws = load_workspace(bundled("a2.json"));
    CommandArgs a;
    a.command = "shift";
    a.object = "K";
    a.direction = "S";
    CommandResult r = run(ws, a);
    CHECK(r.report.at("result").at("iso_class") == "K");
    CHECK(r.summary.find("S K = K") != std::string::npos);
    a.direction = "S*";
    CHECK(run(ws, a).report.at("result").at("iso_class") == "K");
}

TEST_CASE("shift over A3 swaps M1 and M2")
{
    Workspace ws = load_workspace(bundled("a3.json"));
    CommandArgs a;
    a.command = "shift";
    a.triple = "mod";
    a.object = "M1";
    CHECK(run(ws, a).report.at("result").at("iso_class") == "M2");
    a.object = "M2";
    CHECK(run(ws, a).report.at("result").at("iso_class") == "M1");
}

TEST_CASE("verify-tr on A2 passes TR1 to TR4")
{
    Workspace ws = load_workspace(bundled("a2.json"));
    CommandArgs a;
    a.command = "verify-tr";
    CommandResult r = run(ws, a);
    CHECK(exit_code(r.status) == 0);
    for (const char *id : {"TR1", "TR2", "TR3", "TR4"}) CHECK(check(r.report, id).at("status") == "pass");
}

TEST_CASE("mutation-check with D = 0 states the hom conditions are vacuous")
{
    Workspace ws = load_workspace(bundled("a4_stable.json"));
    CommandArgs a;
    a.command = "mutation-check";
    CommandResult r = run(ws, a);
    CHECK(r.report.at("result").at("hom_conditions_vacuous") == true);
    CHECK(r.summary.find("vacuous") != std::string::npos);
    CHECK(exit_code(r.status) == 0);
}

TEST_CASE("frobenius-check recovers add of the regular module as minimal D")
{
    Workspace ws = load_workspace(bundled("a2.json"));
    CommandArgs a;
    a.command = "frobenius-check";
    a.triple = "mod";
    CommandResult r = run(ws, a);
    CHECK(r.report.at("result").at("frobenius") == true);
    CHECK(r.report.at("result").at("minimal_D") == json::array({"R"}));
}

TEST_CASE("reports are byte-identical across runs and seeds only move witnesses")
{
    CommandArgs a;
    a.command = "verify-theory";
    Workspace w1 = load_workspace(bundled("a2.json"));
    Workspace w2 = load_workspace(bundled("a2.json"));
    CHECK(run(w1, a).report.dump(2) == run(w2, a).report.dump(2));
    for (std::uint64_t s : {2u, 3u, 11u}) {
        Workspace ws = load_workspace(bundled("a2.json"), {s, std::nullopt, std::nullopt});
        a.command = "verify-tr";
        CHECK(run(ws, a).status == Status::pass);
    }
}

TEST_CASE("usage errors")
{
    Workspace ws = load_workspace(bundled("a2.json"));
    CommandArgs a;
    a.command = "nonsense";
    CHECK_THROWS_AS(run(ws, a), contract_error);
    a.command = "shift";
    CHECK_THROWS_AS(run(ws, a), contract_error);
    a.object = "M9";
    CHECK_THROWS_WITH_AS(run(ws, a), doctest::Contains("M9"), workspace_error);
    a.command = "cone";
    a.source = "K";
    a.target = "K";
    a.basis = 5;
    CHECK_THROWS_AS(run(ws, a), contract_error);
    CHECK(exit_code(Status::fail) == 1);
    CHECK(exit_code(Status::inconclusive) == 2);
}

TEST_CASE("every command runs on the bundled A3 workspace")
{
    Workspace ws = load_workspace(bundled("a3.json"));
    CommandArgs a;
    a.triple = "stable";
    a.object = "M2";
    a.source = "M1";
    a.target = "M2";
    a.source2 = "M2";
    for (const auto &c : command_names()) {
        CAPTURE(c);
        a.command = c;
        CHECK(run(ws, a).status == Status::pass);
    }
}
