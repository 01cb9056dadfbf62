#include <doctest.h>

#include "fixtures.hpp"
#include "stablecat/error.hpp"
#include "stablecat/pseudotri.hpp"

#include <algorithm>

using namespace stablecat;
using namespace stablecat::fixtures;

namespace {

/// Oracle for F_p[x]/(x^n): dim of stable Hom(J_i, J_j) is min(i, j) - max(0, i + j - n).
std::size_t stable_hom_formula(std::size_t i, std::size_t j, std::size_t n)
{
    return std::min(i, j) - (i + j > n ? i + j - n : 0);
}

bool iso(const Backend &b, const Module &m, const Module &n)
{
    return b.category().isomorphism(m, n).verdict == Verdict::yes;
}

}

TEST_CASE("abelian completions")
{
    auto a = make_a(2, 2);
    auto ab = Backend::abelian(a);
    Module k = jordan(a, 1), r = jordan(a, 2);
    Morphism soc{k, r, Matrix::from_rows(Field(2), {{0}, {1}})};
    Morphism top{r, k, Matrix::from_rows(Field(2), {{1, 0}})};

    auto t = ab->complete_right(identity(r));
    CHECK(t.g.target.dim() == 0);

    auto u = ab->complete_right(soc);
    CHECK(iso(*ab, u.g.target, k));
    CHECK(u.h.matrix.is_zero());
    CHECK(ab->in_right(u));

    auto l = ab->complete_left(top);
    CHECK(iso(*ab, l.f.source, k));
    CHECK(ab->in_left(l));

    CHECK(ab->sigma_epic(top));
    CHECK_FALSE(ab->omega_monic(top));
    CHECK(ab->omega_monic(soc));
    CHECK_FALSE(ab->sigma_epic(soc));
    CHECK(ab->sigma(r).dim() == 0);
    CHECK(ab->omega(k).dim() == 0);
}

TEST_CASE("abelian extensions")
{
    auto a = make_a(2, 2);
    auto ab = Backend::abelian(a);
    Module k = jordan(a, 1), r = jordan(a, 2);
    Morphism top{r, k, Matrix::from_rows(Field(2), {{1, 0}})};
    Morphism soc{k, r, Matrix::from_rows(Field(2), {{0}, {1}})};

    Extension x = ab->extension_from_epic(top);
    CHECK(ab->validate(x).ok);
    CHECK(ab->validate(ab->extension_from_monic(soc)).ok);
    CHECK(ab->validate(ab->biproduct_extension(k, r)).ok);

    Morphism zero = zero_morphism(k, r);
    CHECK_THROWS_WITH_AS(ab->extension_from_epic(zero), "not Sigma-epic: cokernel of dimension 2", contract_error);
    CHECK_THROWS_WITH_AS(ab->extension_from_monic(zero), "not Omega-monic: kernel of dimension 1", contract_error);

    // A triangle whose middle map is not the cokernel is rejected.
    RightTriangle bad{soc, zero_morphism(r, k), zero_morphism(k, ab->zero())};
    CHECK_FALSE(ab->in_right(bad));
    // Composable maps whose objects disagree are rejected with a shape message.
    RightTriangle mismatched{soc, top, identity(k)};
    auto w = ab->in_right(mismatched);
    CHECK_FALSE(w);
    CHECK(w.detail.find("do not match") != std::string::npos);
}

TEST_CASE("stable backend requires self-injectivity")
{
    // Upper triangular 2x2 matrices over F_2 (path algebra of A_2) is not self-injective.
    Field f2(2);
    std::vector<std::vector<std::vector<elem_t>>> c(3, std::vector<std::vector<elem_t>>(3, std::vector<elem_t>(3, 0)));
    // basis e1, e2, a with e1 + e2 = 1; a = e1 a e2.
    c[0][0][0] = 1;
    c[1][1][1] = 1;
    c[0][2][2] = 1;
    c[2][1][2] = 1;
    auto path = std::make_shared<const Algebra>(Algebra("P", f2, c, {1, 1, 0}));
    REQUIRE(path->validate().ok);
    CHECK_THROWS_AS(Backend::stable(path), contract_error);
    CHECK_NOTHROW(Backend::stable(make_a(2, 4)));
}

TEST_CASE("stable shifts on truncated polynomial algebras")
{
    auto a3 = make_a(3, 3);
    auto st = Backend::stable(a3);
    Module m1 = jordan(a3, 1), m2 = jordan(a3, 2);
    CHECK(iso(*st, st->sigma(m1), m2));
    CHECK(iso(*st, st->sigma(m2), m1));
    CHECK(iso(*st, st->omega(m1), m2));
    CHECK(iso(*st, st->omega(m2), m1));
    CHECK(st->sigma(jordan(a3, 3)).dim() == 0);

    auto a4 = make_a(2, 4);
    auto s4 = Backend::stable(a4);
    CHECK(iso(*s4, s4->sigma(jordan(a4, 1)), jordan(a4, 3)));
    CHECK(iso(*s4, s4->sigma(jordan(a4, 2)), jordan(a4, 2)));
    CHECK(iso(*s4, s4->sigma(jordan(a4, 3)), jordan(a4, 1)));
}

TEST_CASE("stable hom dimensions against the formula")
{
    for (auto [p, n] : {std::pair<std::uint64_t, std::size_t>{2, 2}, {3, 3}, {2, 4}, {3, 4}}) {
        auto a = make_a(p, n);
        auto st = Backend::stable(a);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j) {
                CAPTURE(p);
                CAPTURE(n);
                CAPTURE(i);
                CAPTURE(j);
                CHECK(st->category().dim(jordan(a, i), jordan(a, j)) == stable_hom_formula(i, j, n));
            }
    }
}

TEST_CASE("shift functors and psi")
{
    auto a = make_a(3, 3);
    auto st = Backend::stable(a);
    const auto &cat = st->category();
    std::vector<Module> objs{jordan(a, 1), jordan(a, 2), jordan(a, 3)};
    Biproduct mix = Biproduct::of({objs[0], objs[1]}, a);
    objs.push_back(mix.sum);
    std::mt19937_64 gen(7);
    for (const auto &x : objs) {
        CHECK(cat.equal(st->sigma(identity(x)), identity(st->sigma(x))));
        CHECK(cat.equal(st->omega(identity(x)), identity(st->omega(x))));
        for (const auto &y : objs)
            for (const auto &z : objs) {
                Morphism f = random_morphism(x, y, gen), g = random_morphism(y, z, gen);
                CHECK(cat.equal(st->sigma(g * f), st->sigma(g) * st->sigma(f)));
                CHECK(cat.equal(st->omega(g * f), st->omega(g) * st->omega(f)));
            }
    }
    // psi is a bijection with the given inverse, and natural in the second variable.
    for (const auto &x : objs)
        for (const auto &y : objs) {
            Module ox = st->omega(x);
            for (const auto &q : cat.quotient_basis(ox, y)) {
                Morphism u{ox, y, q};
                Morphism w = st->psi(x, u);
                CHECK_FALSE(cat.is_null(w));
                CHECK(cat.equal(st->psi_inverse(y, w), u));
                for (const auto &z : objs) {
                    Morphism v = random_morphism(y, z, gen);
                    CHECK(cat.equal(st->psi(x, v * u), st->sigma(v) * w));
                }
            }
        }
}

TEST_CASE("stable triangles and rotation")
{
    auto a = make_a(3, 3);
    auto st = Backend::stable(a);
    auto faulty = st->with_faults({false, true});
    std::vector<Module> objs{jordan(a, 1), jordan(a, 2), jordan(a, 3)};
    std::mt19937_64 gen(11);
    bool fault_seen = false;
    for (const auto &x : objs)
        for (const auto &y : objs)
            for (int rep = 0; rep < 3; ++rep) {
                Morphism f = random_morphism(x, y, gen);
                RightTriangle t = st->complete_right(f);
                CHECK(st->in_right(t));
                CHECK(st->in_right(st->rotate_right(t)));
                if (!faulty->in_right(faulty->rotate_right(t))) fault_seen = true;

                LeftTriangle l = st->complete_left(f);
                CHECK(st->in_left(l));
                CHECK(st->in_left(st->rotate_left(l)));

                CHECK(st->sigma_epic(f));
                CHECK(st->omega_monic(f));
                CHECK(st->validate(st->extension_from_epic(f)).ok);
                CHECK(st->validate(st->extension_from_monic(f)).ok);
            }
    CHECK(fault_seen);
}

TEST_CASE("extensions from module classes")
{
    auto a = make_a(3, 3);
    auto st = Backend::stable(a);
    auto ab = Backend::abelian(a);
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 3; ++j) {
            Ext1 e(jordan(a, i), jordan(a, j));
            std::mt19937_64 gen(i * 10 + j);
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<elem_t> c(e.dim());
                for (auto &v : c) v = static_cast<elem_t>(gen() % 3);
                ShortExact s = e.realize(c);
                CHECK(st->validate(st->from_short_exact(s)).ok);
                CHECK(ab->validate(ab->from_short_exact(s)).ok);
            }
        }
    CHECK(st->validate(st->biproduct_extension(jordan(a, 1), jordan(a, 2))).ok);
}

TEST_CASE("psi sign fault breaks extensions")
{
    auto a = make_a(3, 3);
    auto clean = Backend::stable(a);
    auto st = clean->with_faults({true, false});
    Module m1 = jordan(a, 1), m2 = jordan(a, 2);
    auto q = st->category().quotient_basis(m2, m1);
    REQUIRE(q.size() == 1);
    Morphism g{m2, m1, q[0]};
    CHECK(clean->validate(clean->extension_from_epic(g)).ok);
    // With psi negated, h = -psi(e) is the negative of the true connecting map, which no triangle iso absorbs
    // because g and h are both nonzero.
    CHECK_FALSE(st->validate(st->extension_from_epic(g)).ok);
}

TEST_CASE("octahedral extension")
{
    auto a = make_a(3, 3);
    auto st = Backend::stable(a);
    std::vector<Module> objs{jordan(a, 1), jordan(a, 2)};
    std::mt19937_64 gen(5);
    int runs = 0;
    for (const auto &x : objs)
        for (const auto &xp : objs)
            for (const auto &m : objs) {
                Morphism l = random_morphism(x, m, gen), lp = random_morphism(xp, m, gen);
                Extension el = st->extension_from_monic(l);
                Extension elp = st->extension_from_monic(lp);
                Morphism f = elp.g * l;
                Extension ef = st->extension_from_monic(f);
                OctahedronResult r = octahedron_ext(*st, ef, el, elp);
                const auto &cat = st->category();
                CHECK(cat.equal(r.h_prime * ef.g, elp.h));
                CHECK(cat.equal(ef.h * r.g_prime, el.h));
                CHECK(cat.equal(r.g_prime * el.g, ef.g * elp.g));
                CHECK(cat.is_null(st->sigma(l) * ef.h + st->sigma(lp) * r.h_prime));
                CHECK(st->validate(r.ext_f_prime).ok);
                ++runs;
            }
    CHECK(runs == 8);

    // Abelian: K -> R with the trivial second leg.
    auto a2 = make_a(2, 2);
    auto ab = Backend::abelian(a2);
    Module k = jordan(a2, 1), r = jordan(a2, 2);
    Morphism soc{k, r, Matrix::from_rows(Field(2), {{0}, {1}})};
    Extension el = ab->extension_from_monic(soc);
    Extension elp = ab->extension_from_monic(zero_morphism(ab->zero(), r));
    Extension ef = ab->extension_from_monic(elp.g * soc);
    OctahedronResult res = octahedron_ext(*ab, ef, el, elp);
    CHECK(ab->validate(res.ext_f_prime).ok);
    CHECK_THROWS_AS(octahedron_ext(*ab, el, el, el), contract_error);
}
