#include <doctest.h>

#include "stablecat/decompose.hpp"
#include "stablecat/error.hpp"
#include "stablecat/ext.hpp"
#include "fixtures.hpp"

#include <cmath>

using namespace stablecat;
using namespace stablecat::fixtures;

namespace {

/// Oracle: count all intertwining matrices by enumeration; returns log_p(count).
std::size_t brute_hom_dim(const Module &m, const Module &n)
{
    const Field f = m.field();
    const std::size_t len = m.dim() * n.dim();
    std::uint64_t total = 1, count = 0;
    for (std::size_t i = 0; i < len; ++i) total *= f.characteristic();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<elem_t> v(len);
        std::uint64_t r = idx;
        for (auto &e : v) {
            e = static_cast<elem_t>(r % f.characteristic());
            r /= f.characteristic();
        }
        Matrix x = Matrix::unflatten(f, n.dim(), m.dim(), v);
        bool ok = true;
        for (std::size_t i = 0; i < m.algebra()->dim() && ok; ++i) ok = x * m.action(i) == n.action(i) * x;
        count += ok;
    }
    return static_cast<std::size_t>(std::lround(std::log(double(count)) / std::log(double(f.characteristic()))));
}

}

TEST_CASE("algebra validation")
{
    Field f2(2);
    Algebra a2 = Algebra::truncated_polynomial("A2", f2, 2);
    CHECK(a2.validate().ok);
    CHECK(a2.generators() == std::vector<std::size_t>{1});

    // x*x = 1 gives F_2[x]/(x^2 - 1), the group algebra of C_2: still associative and unital.
    Algebra tampered("A2'", f2, {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}}, {1, 0});
    CHECK(tampered.validate().ok);

    // Breaking the unit law is caught, with the offending index.
    Algebra broken("bad", f2, {{{1, 0}, {0, 0}}, {{0, 1}, {0, 0}}}, {1, 0});
    auto d = broken.validate();
    CHECK_FALSE(d.ok);
    CHECK(d.message == "algebra 'bad': left unit law fails at basis element 1");

    // A non-associative table: e_1 e_1 = e_2, e_1 e_2 = e_2, e_2 e_1 = 0 on {1, e_1, e_2}.
    std::vector<std::vector<std::vector<elem_t>>> c(3, std::vector<std::vector<elem_t>>(3, std::vector<elem_t>(3, 0)));
    for (std::size_t i = 0; i < 3; ++i) {
        c[0][i][i] = 1;
        c[i][0][i] = 1;
    }
    c[1][1][2] = 1;
    c[1][2][2] = 1;
    Algebra nonassoc("na", f2, c, {1, 0, 0});
    auto dn = nonassoc.validate();
    CHECK_FALSE(dn.ok);
    CHECK(dn.message == "algebra 'na': associativity fails at (1,1,1)");
}

TEST_CASE("module validation and the zero module")
{
    auto a = make_a(2, 2);
    CHECK(Module::zero(a).validate().ok);
    CHECK(Module::regular(a).validate().ok);
    CHECK(Module::dual_regular(a).validate().ok);
    Matrix bad = Matrix::from_rows(a->field(), {{1}});
    Module m(a, 1, {Matrix::identity(a->field(), 1), bad});  // x acts by 1 but x^2 = 0
    CHECK_FALSE(m.validate().ok);
}

TEST_CASE("hom_space dimensions against brute-force enumeration")
{
    auto a2 = make_a(2, 2);
    Module r = Module::regular(a2), k = jordan(a2, 1);
    CHECK(hom_space(r, r).dim() == 2);
    CHECK(brute_hom_dim(r, r) == 2);
    CHECK(hom_space(k, r).dim() == 1);
    CHECK(brute_hom_dim(k, r) == 1);
    CHECK(hom_space(Module::zero(a2), r).dim() == 0);

    auto a3 = make_a(3, 3);
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 2; ++j) {
            Module mi = jordan(a3, i), mj = jordan(a3, j);
            auto hs = hom_space(mi, mj);
            CHECK(hs.dim() == std::min(i, j));
            CHECK(hs.dim() == brute_hom_dim(mi, mj));
            for (auto &b : hs.basis) CHECK(is_intertwiner(mi, mj, b));
        }
    CHECK_THROWS_AS(hom_space(r, jordan(a3, 1)), contract_error);
}

TEST_CASE("kernel, image and cokernel")
{
    auto a2 = make_a(2, 2);
    const Field f = a2->field();
    Module r = Module::regular(a2), k = jordan(a2, 1);

    auto idk = kci(r, r, Matrix::identity(f, 2));
    CHECK(idk.kernel.dim() == 0);
    CHECK(idk.cokernel.dim() == 0);

    // Socle inclusion K -> R: 1 |-> x.
    Matrix soc = Matrix::from_rows(f, {{0}, {1}});
    REQUIRE(is_intertwiner(k, r, soc));
    auto s = kci(k, r, soc);
    CHECK(s.kernel.dim() == 0);
    CHECK(s.cokernel.dim() == 1);
    CHECK(s.cokernel.validate().ok);
    CHECK(find_isomorphism(s.cokernel, k, 1).verdict == Verdict::yes);
    CHECK((s.cokernel_projection * soc).is_zero());
    CHECK(is_intertwiner(r, s.cokernel, s.cokernel_projection));

    Module k2 = direct_sum({k, k}, a2).sum;
    auto z = kci(r, k2, Matrix(f, 2, 2));
    CHECK(z.kernel.dim() == 2);
    CHECK(z.cokernel.dim() == 2);

    // dim ker + dim im = dim source, dim im + dim coker = dim target, on all hom basis maps.
    auto a3 = make_a(3, 3);
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 3; ++j)
            for (auto &b : hom_space(jordan(a3, i), jordan(a3, j)).basis) {
                auto q = kci(jordan(a3, i), jordan(a3, j), b);
                CHECK(q.kernel.dim() + q.image.dim() == i);
                CHECK(q.image.dim() + q.cokernel.dim() == j);
                CHECK(q.kernel.validate().ok);
                CHECK(q.cokernel.validate().ok);
                CHECK(q.image_inclusion * q.image_factor == b);
            }
}

TEST_CASE("direct sums")
{
    auto a2 = make_a(2, 2);
    const Field f = a2->field();
    CHECK(direct_sum({}, a2).sum.dim() == 0);
    auto kk = direct_sum({jordan(a2, 1), jordan(a2, 1)}, a2);
    CHECK(kk.sum.dim() == 2);
    CHECK(kk.sum.action(1).is_zero());
    auto kr = direct_sum({jordan(a2, 1), Module::regular(a2)}, a2);
    CHECK(kr.sum.action(1) == Matrix::from_rows(f, {{0, 0, 0}, {0, 0, 0}, {0, 1, 0}}));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            Matrix c = kr.projections[i] * kr.injections[j];
            CHECK((i == j ? c.is_identity() : c.is_zero()));
        }
}

TEST_CASE("decompose")
{
    auto a2 = make_a(2, 2);
    Module r = Module::regular(a2), k = jordan(a2, 1);
    auto d = decompose(direct_sum({k, r}, a2).sum, 3);
    CHECK(d.conclusive);
    REQUIRE(d.summands.size() == 2);
    CHECK(d.validate().ok);
    CHECK(find_isomorphism(d.summands[0].module, k, 1).verdict == Verdict::yes);
    CHECK(find_isomorphism(d.summands[1].module, r, 1).verdict == Verdict::yes);

    // End(R) has 4 elements: 0, 1, x, 1 + x; all nilpotent or invertible, so R is indecomposable.
    auto dr = decompose(r, 1);
    CHECK(dr.summands.size() == 1);
    CHECK(decompose(Module::zero(a2), 1).summands.empty());

    // Krull-Schmidt at desk scale: two seeds give matching multisets of dimensions and iso classes.
    auto a3 = make_a(3, 3);
    Module big = direct_sum({jordan(a3, 2), jordan(a3, 1), jordan(a3, 3), jordan(a3, 2)}, a3).sum;
    auto d1 = decompose(big, 11), d2 = decompose(big, 12);
    REQUIRE(d1.summands.size() == 4);
    REQUIRE(d2.summands.size() == 4);
    CHECK(d1.validate().ok);
    CHECK(d2.validate().ok);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(find_isomorphism(d1.summands[i].module, d2.summands[i].module, 5).verdict == Verdict::yes);

    // decompose then direct_sum reconstructs an isomorphic module.
    std::vector<Module> parts;
    for (auto &s : d1.summands) parts.push_back(s.module);
    CHECK(find_isomorphism(direct_sum(parts, a3).sum, big, 2).verdict == Verdict::yes);
}

TEST_CASE("add_membership")
{
    auto a2 = make_a(2, 2);
    Module r = Module::regular(a2), k = jordan(a2, 1);
    auto m = add_membership(direct_sum({r, r}, a2).sum, {r}, 1);
    CHECK(m.verdict == Verdict::yes);
    CHECK(m.multiplicity == std::vector<std::size_t>{2});
    CHECK(add_membership(k, {r}, 1).verdict == Verdict::no);
    CHECK(add_membership(Module::zero(a2), {k}, 1).verdict == Verdict::yes);
}

TEST_CASE("ext1")
{
    auto a2 = make_a(2, 2);
    Module r = Module::regular(a2), k = jordan(a2, 1);
    Ext1 e(k, k);
    CHECK(e.dim() == 1);
    auto nonsplit = e.realize({1});
    CHECK(find_isomorphism(nonsplit.middle, r, 1).verdict == Verdict::yes);
    CHECK(is_intertwiner(k, nonsplit.middle, nonsplit.f));
    CHECK(is_intertwiner(nonsplit.middle, k, nonsplit.g));
    CHECK((nonsplit.g * nonsplit.f).is_zero());
    CHECK(rank(nonsplit.f) == 1);
    CHECK(rank(nonsplit.g) == 1);

    auto split = e.realize({0});
    CHECK(find_isomorphism(split.middle, direct_sum({k, k}, a2).sum, 1).verdict == Verdict::yes);

    CHECK(Ext1(r, k).dim() == 0);
    CHECK(Ext1(r, r).dim() == 0);

    auto a3 = make_a(3, 3);
    // Ext^1(J_i, J_j) over F_3[x]/(x^3): dim min(i, j, 3 - i, 3 - j).
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 3; ++j)
            CHECK(Ext1(jordan(a3, i), jordan(a3, j)).dim() == std::min({i, j, 3 - i, 3 - j}));
}
