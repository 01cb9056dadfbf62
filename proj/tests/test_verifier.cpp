#include <doctest.h>

#include "fixtures.hpp"
#include "stablecat/verifier.hpp"

#include <chrono>

using namespace stablecat;
using namespace stablecat::fixtures;

namespace {

std::vector<Module> blocks(const AlgebraPtr &a, std::size_t upto)
{
    std::vector<Module> out;
    for (std::size_t k = 1; k <= upto; ++k) out.push_back(jordan(a, k));
    return out;
}

void require_all_pass(const std::vector<CheckReport> &rs)
{
    for (const auto &r : rs) {
        CAPTURE(r.id);
        CAPTURE(r.detail);
        CAPTURE(r.witness.dump());
        CHECK(r.status == Status::pass);
        CHECK(r.instances > 0);
    }
}

const CheckReport &find(const std::vector<CheckReport> &rs, const std::string &id)
{
    for (const auto &r : rs)
        if (r.id == id) return r;
    FAIL("missing check " << id);
    throw;
}

}

TEST_CASE("pseudo-triangulation axioms on the abelian backend over A2")
{
    auto a = make_a(2, 2);
    auto rs = verify_pseudotriangulation(*Backend::abelian(a), blocks(a, 2));
    CHECK(rs.size() == 13);
    require_all_pass(rs);
    CHECK(std::is_sorted(rs.begin(), rs.end(), [](auto &x, auto &y) { return x.id < y.id; }));
}

TEST_CASE("pseudo-triangulation axioms on both backends over A3")
{
    auto a = make_a(3, 3);
    auto t0 = std::chrono::steady_clock::now();
    require_all_pass(verify_pseudotriangulation(*Backend::abelian(a), blocks(a, 3)));
    auto t1 = std::chrono::steady_clock::now();
    require_all_pass(verify_pseudotriangulation(*Backend::stable(a), blocks(a, 2)));
    auto t2 = std::chrono::steady_clock::now();
    MESSAGE("abelian " << std::chrono::duration<double>(t1 - t0).count() << " s, stable "
                       << std::chrono::duration<double>(t2 - t1).count() << " s");
}

TEST_CASE("fault injection is caught and replays")
{
    auto a = make_a(3, 3);
    auto clean = Backend::stable(a);
    auto inv = blocks(a, 2);

    auto rot = clean->with_faults({false, true});
    auto rs = verify_pseudotriangulation(*rot, inv);
    const CheckReport &r2 = find(rs, "RTR2");
    REQUIRE(r2.status == Status::fail);
    CHECK(replay_pseudotriangulation(*rot, inv, r2).status == Status::fail);
    CHECK(replay_pseudotriangulation(*clean, inv, r2).status == Status::pass);

    auto psi = clean->with_faults({true, false});
    rs = verify_pseudotriangulation(*psi, inv);
    const CheckReport &gl = find(rs, "G1");
    REQUIRE(gl.status == Status::fail);
    CHECK(replay_pseudotriangulation(*psi, inv, gl).status == Status::fail);
    CHECK(replay_pseudotriangulation(*clean, inv, gl).status == Status::pass);
}

TEST_CASE("TR suite over A2 and A3 with Z = D = mod")
{
    for (auto [p, n] : {std::pair{2u, 2u}, std::pair{3u, 3u}}) {
        auto a = make_a(p, n);
        SubcategorySpec all{"mod", blocks(a, n)};
        auto t = FrobeniusTriple::make(Backend::abelian(a), all, all);
        auto rs = verify_TR_suite(*t);
        require_all_pass(rs);
        std::vector<std::string> ids;
        for (const auto &r : rs) ids.push_back(r.id);
        CHECK(ids == std::vector<std::string>{"TR1", "TR2", "TR3", "TR4", "frobenius"});
    }
}

TEST_CASE("TR suite refuses a non-Frobenius triple")
{
    auto a = make_a(2, 2);
    SubcategorySpec all{"mod", blocks(a, 2)};
    auto t = FrobeniusTriple::make(Backend::abelian(a), all, {"0", {}});
    auto rs = verify_TR_suite(*t);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].id == "frobenius");
    CHECK(rs[0].status == Status::fail);
    CHECK(replay_TR_suite(*t, rs[0]).status == Status::fail);
}

TEST_CASE("stable backend with D = 0 agrees with its own triangles")
{
    auto a = make_a(2, 4);
    auto t = FrobeniusTriple::make(Backend::stable(a), {"stmod", blocks(a, 3)}, {"0", {}});
    auto rs = verify_TR_suite(*t);
    require_all_pass(rs);
    CHECK(find(rs, "backend-triangles-agree").instances > 0);
}

TEST_CASE("Frobenius theory checks")
{
    auto a = make_a(2, 2);
    auto ab = Backend::abelian(a);
    Module k = jordan(a, 1), r = jordan(a, 2);
    SubcategorySpec all{"mod", {k, r}};
    auto small = FrobeniusTriple::make(ab, all, {"add(R)", {r}});
    auto large = FrobeniusTriple::make(ab, all, all);
    auto a3 = make_a(3, 3);
    auto t3 = FrobeniusTriple::make(Backend::stable(a3), {"stmod", blocks(a3, 2)}, {"0", {}});
    TheoryInput in{{small, large, t3}, {{small, large}}};
    auto rs = verify_frobenius_theory(in);
    require_all_pass(rs);
    CHECK(rs.size() == 7);
    CHECK(small->injectives().size() == 1);
    CHECK(large->injectives().size() == 1);

    // A reversed chain is caught by the containment check, and the witness replays.
    TheoryInput rev{{small, large}, {{large, small}}};
    auto bad = verify_frobenius_theory(rev);
    const CheckReport &c = find(bad, "enlargement-contains");
    REQUIRE(c.status == Status::fail);
    CHECK(replay_frobenius_theory(rev, c).status == Status::fail);
}

TEST_CASE("reports are deterministic and monotone in budget")
{
    auto a = make_a(3, 3);
    auto st = Backend::stable(a);
    auto inv = blocks(a, 2);
    VerifyBudget tight;
    tight.enumeration_limit = 2;
    tight.samples = 1;
    tight.search_limit = 2;
    tight.search_trials = 2;
    auto r1 = to_json(verify_pseudotriangulation(*st, inv, tight)).dump();
    auto r2 = to_json(verify_pseudotriangulation(*st, inv, tight)).dump();
    CHECK(r1 == r2);
    for (const auto &r : verify_pseudotriangulation(*st, inv, tight)) CHECK(r.status != Status::fail);
}
