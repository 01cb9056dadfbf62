#include "verify_util.hpp"

#include "stablecat/error.hpp"

#include <map>
#include <mutex>

namespace stablecat {

using namespace verify;

namespace {

struct Context
{
    const Backend &b;
    std::vector<Module> obj;
    VerifyBudget budget;

    mutable std::mutex mutex;
    mutable std::map<std::string, Extension> ext_cache;

    const QuotientCategory &cat() const { return b.category(); }
    const Module &at(const json &i, std::size_t k) const { return obj.at(i.at("objects").at(k).get<std::size_t>()); }
    Morphism map(const json &i, const char *key, std::size_t s, std::size_t t) const
    {
        return morphism_from(i.at(key), at(i, s), at(i, t));
    }
    std::string name(std::size_t k) const
    {
        if (k == 0) return "0";
        return obj[k].name().empty() ? "#" + std::to_string(k) : obj[k].name();
    }
    json instance(std::vector<std::size_t> idx) const
    {
        json n = json::array();
        for (auto k : idx) n.push_back(name(k));
        return {{"objects", idx}, {"names", n}};
    }
    Extension extension(const json &spec) const;
};

Extension Context::extension(const json &spec) const
{
    const std::string key = spec.dump();
    {
        std::lock_guard lock(mutex);
        if (auto it = ext_cache.find(key); it != ext_cache.end()) return it->second;
    }
    auto build = [&] {
        if (spec.at("kind") == "epic") return b.extension_from_epic(map(spec, "g", 0, 1));
        Ext1 e(at(spec, 0), at(spec, 1));
        std::vector<elem_t> c;
        for (const auto &v : spec.at("class")) c.push_back(at(spec, 0).field().reduce(v.get<std::int64_t>()));
        return b.from_short_exact(e.realize(c));
    };
    Extension x = build();
    std::lock_guard lock(mutex);
    ext_cache.emplace(key, x);
    return x;
}

Outcome from_verdict(Verdict v, const std::string &no, const VerifyBudget &budget)
{
    if (v == Verdict::yes) return Outcome::pass();
    if (v == Verdict::no) return Outcome::fail(no);
    return Outcome::inconclusive(budget_detail(budget));
}

Outcome from_witnessed(const Witnessed &w, const VerifyBudget &budget)
{
    if (w) return Outcome::pass();
    if (w.verdict == Verdict::no) return Outcome::fail(w.detail);
    return Outcome::inconclusive(w.detail + "; " + budget_detail(budget));
}

// Triangulation axioms -------------------------------------------------------------------------------------------

Outcome rtr1(const Context &c, const json &i)
{
    const Backend &b = c.b;
    if (i.at("kind") == "identity") {
        const Module &a = c.at(i, 0);
        RightTriangle t{zero_morphism(b.zero(), a), identity(a), zero_morphism(a, b.sigma(b.zero()))};
        return from_witnessed(b.in_right(t), c.budget);
    }
    Morphism f = c.map(i, "f", 0, 1);
    RightTriangle t = b.complete_right(f);
    if (!(t.f.matrix == f.matrix)) return Outcome::fail("completion does not start with f");
    return from_witnessed(b.in_right(t), c.budget);
}

Outcome ltr1(const Context &c, const json &i)
{
    const Backend &b = c.b;
    if (i.at("kind") == "identity") {
        const Module &a = c.at(i, 0);
        LeftTriangle t{zero_morphism(b.omega(b.zero()), a), identity(a), zero_morphism(a, b.zero())};
        return from_witnessed(b.in_left(t), c.budget);
    }
    Morphism g = c.map(i, "g", 0, 1);
    LeftTriangle t = b.complete_left(g);
    if (!(t.g.matrix == g.matrix)) return Outcome::fail("completion does not end with g");
    return from_witnessed(b.in_left(t), c.budget);
}

Outcome rtr2(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism f = c.map(i, "f", 0, 1);
    RightTriangle t = b.complete_right(f);
    RightTriangle r = b.rotate_right(t);
    if (auto w = b.in_right(r); !w) return from_witnessed(w, c.budget);
    RightTriangle axiom{t.g, t.h, -b.sigma(f)};
    return from_witnessed(b.in_right(axiom), c.budget);
}

Outcome ltr2(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism g = c.map(i, "g", 0, 1);
    LeftTriangle t = b.complete_left(g);
    if (auto w = b.in_left(b.rotate_left(t)); !w) return from_witnessed(w, c.budget);
    LeftTriangle axiom{-b.omega(g), t.e, t.f};
    return from_witnessed(b.in_left(axiom), c.budget);
}

Outcome rtr3(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism f = c.map(i, "f", 0, 1), fp = c.map(i, "fp", 2, 3);
    RightTriangle t = b.complete_right(f), u = b.complete_right(fp);
    LinearSystem sq(c.cat());
    auto a = sq.unknown(f.source, fp.source);
    auto bb = sq.unknown(f.target, fp.target);
    sq.equation({sq.term_right(bb, f), sq.term_left(a, -fp)}, zero_morphism(f.source, fp.target));
    auto squares = sq.solve();
    if (!squares) throw consistency_error("homogeneous square system has no solution");
    return for_each_direction(*squares, [&](const std::vector<Morphism> &ab) {
        LinearSystem sys(c.cat());
        auto z = sys.unknown(t.g.target, u.g.target);
        sys.equation({sys.term_right(z, t.g)}, u.g * ab[1]);
        sys.equation({sys.term_left(z, u.h)}, b.sigma(ab[0]) * t.h);
        if (!sys.solve()) return Outcome::fail("no third map completes the square (a, b)");
        return Outcome::pass();
    });
}

Outcome ltr3(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism g = c.map(i, "g", 0, 1), gp = c.map(i, "gp", 2, 3);
    LeftTriangle t = b.complete_left(g), u = b.complete_left(gp);
    LinearSystem sq(c.cat());
    auto bb = sq.unknown(g.source, gp.source);
    auto cc = sq.unknown(g.target, gp.target);
    sq.equation({sq.term_right(cc, g), sq.term_left(bb, -gp)}, zero_morphism(g.source, gp.target));
    auto squares = sq.solve();
    if (!squares) throw consistency_error("homogeneous square system has no solution");
    return for_each_direction(*squares, [&](const std::vector<Morphism> &bc) {
        LinearSystem sys(c.cat());
        auto a = sys.unknown(t.f.source, u.f.source);
        sys.equation({sys.term_left(a, u.f)}, bc[0] * t.f);
        sys.equation({sys.term_right(a, t.e)}, u.e * b.omega(bc[1]));
        if (!sys.solve()) return Outcome::fail("no first map completes the square (b, c)");
        return Outcome::pass();
    });
}

Outcome octahedron_round_trip(const Context &c, const Morphism &l, const Morphism &lp)
{
    const Backend &b = c.b;
    const QuotientCategory &cat = c.cat();
    if (!b.omega_monic(l) || !b.omega_monic(lp)) return Outcome::pass();
    Extension el = b.extension_from_monic(l), elp = b.extension_from_monic(lp);
    Morphism f = elp.g * l;
    if (!b.omega_monic(f)) return Outcome::pass();
    Extension ef = b.extension_from_monic(f);
    OctahedronResult r = octahedron_ext(b, ef, el, elp);
    if (!cat.equal(r.h_prime * ef.g, elp.h)) return Outcome::fail("octahedral extension: h' g != n'");
    if (!cat.equal(ef.h * r.g_prime, el.h)) return Outcome::fail("octahedral extension: h g' != n");
    if (!cat.equal(r.g_prime * el.g, ef.g * elp.g)) return Outcome::fail("octahedral extension: g' m != g m'");
    if (!cat.is_null(b.sigma(l) * ef.h + b.sigma(lp) * r.h_prime))
        return Outcome::fail("octahedral extension: Sigma l h + Sigma l' h' != 0");
    if (!cat.equal(r.ext_f_prime.f, el.g * lp)) return Outcome::fail("octahedral extension: f' != m l'");
    if (auto d = b.validate(r.ext_f_prime); !d.ok) return Outcome::fail("octahedral extension: " + d.message);
    return Outcome::pass();
}

Outcome rtr4(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism l = c.map(i, "l", 0, 2), lp = c.map(i, "lp", 1, 2);
    RightTriangle tl = b.complete_right(l), tlp = b.complete_right(lp);
    Morphism f = tlp.g * l;
    RightTriangle tf = b.complete_right(f);
    LinearSystem sys(c.cat());
    auto gp = sys.unknown(tl.g.target, tf.g.target);
    auto hp = sys.unknown(tf.g.target, b.sigma(lp.source));
    sys.equation({sys.term_right(hp, tf.g)}, tlp.h);
    sys.equation({sys.term_left(gp, tf.h)}, tl.h);
    sys.equation({sys.term_right(gp, tl.g)}, tf.g * tlp.g);
    sys.equation({sys.term_left(hp, b.sigma(lp))}, -(b.sigma(l) * tf.h));
    auto sol = sys.solve();
    if (!sol) return Outcome::fail("no (g', h') satisfies the four octahedral identities");
    Morphism fp = tl.g * lp;
    Verdict v = search_affine(*sol, c.cat().field(), c.budget.seed, c.budget.search_limit, c.budget.search_trials,
                              [&](const std::vector<Morphism> &x) { return static_cast<bool>(b.in_right({fp, x[0], x[1]})); });
    Outcome o = from_verdict(v, "no solution of the octahedral identities gives a right triangle", c.budget);
    if (o.status != Status::pass) return o;
    return octahedron_round_trip(c, l, lp);
}

Outcome ltr4(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism l = c.map(i, "l", 2, 0), lp = c.map(i, "lp", 2, 1);
    LeftTriangle tl = b.complete_left(l), tlp = b.complete_left(lp);
    Morphism f = l * tlp.f;
    LeftTriangle tf = b.complete_left(f);
    LinearSystem sys(c.cat());
    auto gp = sys.unknown(tf.f.source, tl.f.source);
    auto hp = sys.unknown(b.omega(lp.target), tf.f.source);
    sys.equation({sys.term_left(hp, tf.f)}, tlp.e);
    sys.equation({sys.term_right(gp, tf.e)}, tl.e);
    sys.equation({sys.term_left(gp, tl.f)}, tlp.f * tf.f);
    sys.equation({sys.term_right(hp, b.omega(lp))}, -(tf.e * b.omega(l)));
    auto sol = sys.solve();
    if (!sol) return Outcome::fail("no (g', h') satisfies the four dual octahedral identities");
    Morphism gq = lp * tl.f;
    Verdict v = search_affine(*sol, c.cat().field(), c.budget.seed, c.budget.search_limit, c.budget.search_trials,
                              [&](const std::vector<Morphism> &x) { return static_cast<bool>(b.in_left({x[1], x[0], gq})); });
    return from_verdict(v, "no solution of the dual octahedral identities gives a left triangle", c.budget);
}

// Gluing -----------------------------------------------------------------------------------------------------------

Outcome g1(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism g = c.map(i, "g", 0, 1);
    if (!b.sigma_epic(g)) return Outcome::pass();
    LeftTriangle l = b.complete_left(g);
    RightTriangle r = b.complete_right(l.f);
    LinearSystem sys(c.cat());
    auto x = sys.unknown(r.g.target, g.target);
    sys.equation({sys.term_right(x, r.g)}, g);
    sys.equation({sys.term_left(x, -b.psi(g.target, l.e))}, r.h);
    auto sol = sys.solve();
    if (!sol) return Outcome::fail("no c with c g' = g and -psi(e) c = h'");
    InvertibleSearch s = find_invertible(c.cat(), *sol, 0);
    return from_verdict(s.verdict, "comparison maps exist but none is invertible", c.budget);
}

Outcome g2(const Context &c, const json &i)
{
    const Backend &b = c.b;
    Morphism f = c.map(i, "f", 0, 1);
    if (!b.omega_monic(f)) return Outcome::pass();
    RightTriangle r = b.complete_right(f);
    LeftTriangle l = b.complete_left(r.g);
    LinearSystem sys(c.cat());
    auto a = sys.unknown(f.source, l.f.source);
    sys.equation({sys.term_left(a, l.f)}, f);
    sys.equation({sys.term_right(a, -b.psi_inverse(f.source, r.h))}, l.e);
    auto sol = sys.solve();
    if (!sol) return Outcome::fail("no a with f' a = f and -a psi^-1(h) = e'");
    InvertibleSearch s = find_invertible(c.cat(), *sol, 0);
    return from_verdict(s.verdict, "comparison maps exist but none is invertible", c.budget);
}

// Adjoint compatibility ----------------------------------------------------------------------------------------

Outcome ac1(const Context &c, const json &i)
{
    Extension x = c.extension(i.at("first")), y = c.extension(i.at("second"));
    LinearSystem hs(c.cat());
    auto z = hs.unknown(x.c(), y.c());
    hs.equation({hs.term_left(z, y.h)}, zero_morphism(x.c(), y.h.target));
    hs.equation({hs.term_right(z, x.g)}, zero_morphism(x.b(), y.c()));
    auto sol = hs.solve();
    if (!sol) throw consistency_error("homogeneous system has no solution");
    return for_each_direction(*sol, [&](const std::vector<Morphism> &d) {
        LinearSystem sys(c.cat());
        auto cp = sys.unknown(x.c(), y.b());
        sys.equation({sys.term_left(cp, y.g)}, d[0]);
        if (!sys.solve()) return Outcome::fail("c with h' c = 0 and c g = 0 does not factor through g'");
        return Outcome::pass();
    });
}

Outcome ac2(const Context &c, const json &i)
{
    Extension x = c.extension(i.at("first")), y = c.extension(i.at("second"));
    LinearSystem hs(c.cat());
    auto a = hs.unknown(x.a(), y.a());
    hs.equation({hs.term_left(a, y.f)}, zero_morphism(x.a(), y.b()));
    hs.equation({hs.term_right(a, x.e)}, zero_morphism(x.e.source, y.a()));
    auto sol = hs.solve();
    if (!sol) throw consistency_error("homogeneous system has no solution");
    return for_each_direction(*sol, [&](const std::vector<Morphism> &d) {
        LinearSystem sys(c.cat());
        auto ap = sys.unknown(x.b(), y.a());
        sys.equation({sys.term_right(ap, x.f)}, d[0]);
        if (!sys.solve()) return Outcome::fail("a with f' a = 0 and a e = 0 does not factor through f");
        return Outcome::pass();
    });
}

// Hom-exactness ----------------------------------------------------------------------------------------------------

Outcome exactness(const Context &c, const json &i)
{
    const Backend &b = c.b;
    const QuotientCategory &cat = c.cat();
    const Module &e = c.at(i, 2);
    Morphism u = c.map(i, "map", 0, 1);
    if (i.at("side") == "right") {
        RightTriangle t = b.complete_right(u);
        Matrix p1 = precomposition(cat, t.f, e), p2 = precomposition(cat, t.g, e), p3 = precomposition(cat, t.h, e);
        Matrix p4 = precomposition(cat, -b.sigma(u), e);
        if (!exact_at(p2, p1, cat.dim(t.f.target, e))) return Outcome::fail("C(-,E) not exact at C(B,E)");
        if (!exact_at(p3, p2, cat.dim(t.g.target, e))) return Outcome::fail("C(-,E) not exact at C(C,E)");
        if (!exact_at(p4, p3, cat.dim(t.h.target, e))) return Outcome::fail("C(-,E) not exact at C(Sigma A,E)");
        return Outcome::pass();
    }
    LeftTriangle t = b.complete_left(u);
    Matrix q0 = postcomposition(cat, -b.omega(u), e), q1 = postcomposition(cat, t.e, e);
    Matrix q2 = postcomposition(cat, t.f, e), q3 = postcomposition(cat, t.g, e);
    if (!exact_at(q0, q1, cat.dim(e, t.e.source))) return Outcome::fail("C(E,-) not exact at C(E,Omega C)");
    if (!exact_at(q1, q2, cat.dim(e, t.f.source))) return Outcome::fail("C(E,-) not exact at C(E,A)");
    if (!exact_at(q2, q3, cat.dim(e, t.g.source))) return Outcome::fail("C(E,-) not exact at C(E,B)");
    return Outcome::pass();
}

// Instance generation --------------------------------------------------------------------------------------------

std::vector<Family> families(const std::shared_ptr<Context> &cp)
{
    const Context &c = *cp;
    const Backend &b = c.b;
    const QuotientCategory &cat = c.cat();
    const std::size_t n = c.obj.size();
    bool sampled = false;

    auto bind = [cp](Outcome (*fn)(const Context &, const json &)) {
        return [cp, fn](const json &i) { return fn(*cp, i); };
    };

    // every morphism (or the sampled set) and the basis maps of each pair
    std::vector<std::vector<std::vector<Morphism>>> all(n, std::vector<std::vector<Morphism>>(n));
    std::vector<std::vector<std::vector<Morphism>>> basis(n, std::vector<std::vector<Morphism>>(n));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            all[x][y] = enumerate(cat, c.obj[x], c.obj[y], c.budget, x * n + y, &sampled);
            basis[x][y] = basis_and_zero(cat, c.obj[x], c.obj[y]);
        }
    const std::string coverage = sampled ? "sampled hom spaces" : "all morphisms";

    Family r1{"RTR1", {}, bind(rtr1), coverage}, l1{"LTR1", {}, bind(ltr1), coverage};
    Family r2{"RTR2", {}, bind(rtr2), coverage}, l2{"LTR2", {}, bind(ltr2), coverage};
    Family gl1{"G1", {}, bind(g1), coverage + ", Sigma-epic ones"}, gl2{"G2", {}, bind(g2), coverage + ", Omega-monic ones"};
    for (std::size_t x = 0; x < n; ++x) {
        json id = c.instance({x});
        id["kind"] = "identity";
        r1.instances.push_back(id);
        l1.instances.push_back(id);
        for (std::size_t y = 0; y < n; ++y)
            for (const auto &u : all[x][y]) {
                json i = c.instance({x, y});
                i["kind"] = "completion";
                i["f"] = matrix_json(u.matrix);
                r1.instances.push_back(i);
                r2.instances.push_back(i);
                if (b.omega_monic(u)) gl2.instances.push_back(i);
                json j = c.instance({x, y});
                j["kind"] = "completion";
                j["g"] = matrix_json(u.matrix);
                l1.instances.push_back(j);
                l2.instances.push_back(j);
                if (b.sigma_epic(u)) gl1.instances.push_back(j);
            }
    }

    Family r3{"RTR3", {}, bind(rtr3), "basis maps, all squares"}, l3{"LTR3", {}, bind(ltr3), "basis maps, all squares"};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t bb = 0; bb < n; ++bb)
            for (std::size_t ap = 0; ap < n; ++ap)
                for (std::size_t bp = 0; bp < n; ++bp)
                    for (const auto &u : basis[a][bb])
                        for (const auto &v : basis[ap][bp]) {
                            json i = c.instance({a, bb, ap, bp});
                            i["f"] = matrix_json(u.matrix);
                            i["fp"] = matrix_json(v.matrix);
                            r3.instances.push_back(i);
                            json j = c.instance({a, bb, ap, bp});
                            j["g"] = matrix_json(u.matrix);
                            j["gp"] = matrix_json(v.matrix);
                            l3.instances.push_back(j);
                        }

    Family r4{"RTR4", {}, bind(rtr4), "basis maps"}, l4{"LTR4", {}, bind(ltr4), "basis maps"};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t ap = 0; ap < n; ++ap)
            for (std::size_t m = 0; m < n; ++m) {
                for (const auto &l : basis[a][m])
                    for (const auto &lp : basis[ap][m]) {
                        json i = c.instance({a, ap, m});
                        i["l"] = matrix_json(l.matrix);
                        i["lp"] = matrix_json(lp.matrix);
                        r4.instances.push_back(i);
                    }
                for (const auto &l : basis[m][a])
                    for (const auto &lp : basis[m][ap]) {
                        json i = c.instance({a, ap, m});
                        i["l"] = matrix_json(l.matrix);
                        i["lp"] = matrix_json(lp.matrix);
                        l4.instances.push_back(i);
                    }
            }

    std::vector<json> exts;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            for (const auto &u : basis[x][y])
                if (b.sigma_epic(u)) {
                    json s = c.instance({x, y});
                    s["kind"] = "epic";
                    s["g"] = matrix_json(u.matrix);
                    exts.push_back(s);
                }
            if (x == 0 || y == 0) continue;
            Ext1 e(c.obj[x], c.obj[y]);
            for (std::size_t k = 0; k < e.dim(); ++k) {
                json s = c.instance({x, y});
                s["kind"] = "class";
                std::vector<int> coeffs(e.dim(), 0);
                coeffs[k] = 1;
                s["class"] = coeffs;
                exts.push_back(s);
            }
        }
    Family a1{"AC1", {}, bind(ac1), "extensions on Sigma-epic basis maps and basis extension classes"};
    Family a2{"AC2", {}, bind(ac2), "extensions on Sigma-epic basis maps and basis extension classes"};
    for (const auto &s : exts)
        for (const auto &t : exts) {
            json i = {{"first", s}, {"second", t}};
            a1.instances.push_back(i);
            a2.instances.push_back(i);
        }

    Family ex{"hom-exactness", {}, bind(exactness), "basis maps, both sides, every test object"};
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t e = 0; e < n; ++e)
                for (const auto &u : basis[x][y])
                    for (const char *side : {"right", "left"}) {
                        json i = c.instance({x, y, e});
                        i["map"] = matrix_json(u.matrix);
                        i["side"] = side;
                        ex.instances.push_back(i);
                    }

    return {r1, r2, r3, r4, l1, l2, l3, l4, gl1, gl2, a1, a2, ex};
}

std::shared_ptr<Context> context(const Backend &b, const std::vector<Module> &inventory, const VerifyBudget &budget)
{
    auto c = std::make_shared<Context>(b, std::vector<Module>{}, budget);
    c->obj = with_zero(b.zero(), inventory);
    return c;
}

}

std::vector<CheckReport> verify_pseudotriangulation(const Backend &b, const std::vector<Module> &inventory,
                                                    const VerifyBudget &budget)
{
    return run_all(families(context(b, inventory, budget)));
}

CheckReport replay_pseudotriangulation(const Backend &b, const std::vector<Module> &inventory,
                                       const CheckReport &failure, const VerifyBudget &budget)
{
    return replay(families(context(b, inventory, budget)), failure);
}

}
