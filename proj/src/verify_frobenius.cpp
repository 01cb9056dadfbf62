#include "verify_util.hpp"

#include "stablecat/error.hpp"

#include <map>
#include <mutex>
#include <set>

namespace stablecat {

using namespace verify;

namespace {

bool covered(const QuotientCategory &cat, const std::vector<Module> &from, const std::vector<Module> &to)
{
    for (const auto &m : from) {
        if (cat.is_zero_object(m)) continue;
        bool hit = false;
        for (const auto &n : to) hit = hit || cat.isomorphism(m, n).verdict == Verdict::yes;
        if (!hit) return false;
    }
    return true;
}

json names_of(const std::vector<Module> &objs, const std::vector<std::size_t> &idx)
{
    json n = json::array();
    for (auto k : idx) n.push_back(k == 0 ? std::string("0") : objs[k].name().empty() ? "#" + std::to_string(k) : objs[k].name());
    return n;
}

// TR1 to TR4 -----------------------------------------------------------------------------------------------------

struct TrContext
{
    const FrobeniusTriple &t;
    std::vector<Module> obj;
    VerifyBudget budget;

    const QuotientCategory &cat() const { return t.stable(); }
    const Module &at(const json &i, std::size_t k) const { return obj.at(i.at("objects").at(k).get<std::size_t>()); }
    Morphism map(const json &i, const char *key, std::size_t s, std::size_t d) const
    {
        return morphism_from(i.at(key), at(i, s), at(i, d));
    }
    json instance(std::vector<std::size_t> idx) const { return {{"objects", idx}, {"names", names_of(obj, idx)}}; }
};

Outcome distinguished(const Witnessed &w, const std::string &what)
{
    if (w) return Outcome::pass();
    if (w.verdict == Verdict::no) return Outcome::fail(what + ": " + w.detail);
    return Outcome::inconclusive(what + ": " + w.detail);
}

Outcome tr1(const TrContext &c, const json &i)
{
    const FrobeniusTriple &t = c.t;
    if (i.at("kind") == "identity") {
        const Module &x = c.at(i, 0);
        const Module &z = t.backend().zero();
        Triangle id{identity(x), zero_morphism(x, z), zero_morphism(z, t.shift(x)), {}};
        return distinguished(t.is_distinguished(id), "X -id-> X -> 0 -> SX");
    }
    Morphism f = c.map(i, "f", 0, 1);
    Triangle u = t.cone(f);
    if (!(u.f.matrix == f.matrix)) return Outcome::fail("cone does not start with f");
    return distinguished(t.is_distinguished(u), "cone of f");
}

Outcome tr2(const TrContext &c, const json &i)
{
    const FrobeniusTriple &t = c.t;
    Morphism f = c.map(i, "f", 0, 1);
    Triangle r = t.rotate(t.cone(f));
    if (!c.cat().equal(r.h, -t.shift(f))) return Outcome::fail("rotation does not end with -S f");
    return distinguished(t.is_distinguished(r), "rotated cone");
}

Outcome tr3(const TrContext &c, const json &i)
{
    const FrobeniusTriple &t = c.t;
    const QuotientCategory &cat = c.cat();
    Morphism f = c.map(i, "f", 0, 1), fp = c.map(i, "fp", 2, 3);
    Triangle u = t.cone(f), v = t.cone(fp);
    LinearSystem sq(cat);
    auto x = sq.unknown(f.source, fp.source);
    auto y = sq.unknown(f.target, fp.target);
    sq.equation({sq.term_right(y, f), sq.term_left(x, -fp)}, zero_morphism(f.source, fp.target));
    auto squares = sq.solve();
    if (!squares) throw consistency_error("homogeneous square system has no solution");
    return for_each_direction(*squares, [&](const std::vector<Morphism> &xy) {
        auto z = t.fill_in(u, v, xy[0], xy[1]);
        if (!z) return Outcome::fail("no fill-in for a commuting square");
        if (!cat.equal(*z * u.g, v.g * xy[1])) return Outcome::fail("fill-in: z g != g' y");
        if (!cat.equal(t.shift(xy[0]) * u.h, v.h * *z)) return Outcome::fail("fill-in: S(x) h != h' z");
        return Outcome::pass();
    });
}

Outcome tr4(const TrContext &c, const json &i)
{
    const FrobeniusTriple &t = c.t;
    const QuotientCategory &cat = c.cat();
    Morphism l = c.map(i, "l", 0, 2), lp = c.map(i, "lp", 1, 2);
    Triangle tl = t.cone(l), tlp = t.cone(lp);
    Triangle tf = t.cone(tlp.g * l);
    OctahedronWitness o = t.octahedron(tl, tlp, tf);
    if (!cat.equal(o.g_prime * tl.g, tf.g * tlp.g)) return Outcome::fail("g' m != g m'");
    if (!cat.equal(o.q_prime * tf.g, tlp.h)) return Outcome::fail("q' g != v'");
    if (!cat.equal(tf.h * o.g_prime, tl.h)) return Outcome::fail("q g' != v");
    if (!cat.is_null(t.shift(lp) * o.q_prime + t.shift(l) * tf.h)) return Outcome::fail("S l' q' + S l q != 0");
    if (!cat.equal(o.t_f_prime.f, tl.g * lp)) return Outcome::fail("f' != m l'");
    return distinguished(t.is_distinguished(o.t_f_prime), "X' -> B' -> C -> SX'");
}

/// With D = 0 on a stable backend the shift is Sigma through gamma_X : SX -> Sigma X, and the two triangle classes
/// should coincide.
Outcome agree(const TrContext &c, const json &i)
{
    const FrobeniusTriple &t = c.t;
    const Backend &b = t.backend();
    Morphism f = c.map(i, "f", 0, 1);
    Morphism gamma = t.injective_presentation(f.source)->gamma();
    auto inv = b.category().inverse(gamma);
    if (!inv) return Outcome::fail("gamma_X is not invertible");
    Triangle u = t.cone(f);
    if (auto w = b.in_right({f, u.g, gamma * u.h}); !w) return distinguished(w, "cone read in the backend");
    RightTriangle r = b.complete_right(f);
    return distinguished(t.is_distinguished({f, r.g, *inv * r.h, {}}), "backend triangle read in Z/I_D");
}

std::vector<Family> tr_families(const std::shared_ptr<TrContext> &cp)
{
    const TrContext &c = *cp;
    const std::size_t n = c.obj.size();
    auto bind = [cp](Outcome (*fn)(const TrContext &, const json &)) {
        return [cp, fn](const json &i) { return fn(*cp, i); };
    };
    bool sampled = false;
    std::vector<std::vector<std::vector<Morphism>>> all(n, std::vector<std::vector<Morphism>>(n)), basis = all;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            all[x][y] = enumerate(c.cat(), c.obj[x], c.obj[y], c.budget, x * n + y, &sampled);
            basis[x][y] = basis_and_zero(c.cat(), c.obj[x], c.obj[y]);
        }
    const std::string coverage = sampled ? "sampled hom spaces" : "all morphisms";

    Family f1{"TR1", {}, bind(tr1), coverage}, f2{"TR2", {}, bind(tr2), coverage};
    Family f3{"TR3", {}, bind(tr3), "basis maps, all squares"}, f4{"TR4", {}, bind(tr4), "basis maps"};
    Family ag{"backend-triangles-agree", {}, bind(agree), "basis maps"};
    for (std::size_t x = 0; x < n; ++x) {
        json id = c.instance({x});
        id["kind"] = "identity";
        f1.instances.push_back(id);
        for (std::size_t y = 0; y < n; ++y) {
            for (const auto &u : all[x][y]) {
                json i = c.instance({x, y});
                i["kind"] = "cone";
                i["f"] = matrix_json(u.matrix);
                f1.instances.push_back(i);
                f2.instances.push_back(i);
            }
            for (const auto &u : basis[x][y]) {
                json i = c.instance({x, y});
                i["f"] = matrix_json(u.matrix);
                ag.instances.push_back(i);
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t ap = 0; ap < n; ++ap)
                for (std::size_t bp = 0; bp < n; ++bp)
                    for (const auto &u : basis[a][b])
                        for (const auto &v : basis[ap][bp]) {
                            json i = c.instance({a, b, ap, bp});
                            i["f"] = matrix_json(u.matrix);
                            i["fp"] = matrix_json(v.matrix);
                            f3.instances.push_back(i);
                        }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t xp = 0; xp < n; ++xp)
            for (std::size_t m = 0; m < n; ++m)
                for (const auto &l : basis[x][m])
                    for (const auto &lp : basis[xp][m]) {
                        json i = c.instance({x, xp, m});
                        i["l"] = matrix_json(l.matrix);
                        i["lp"] = matrix_json(lp.matrix);
                        f4.instances.push_back(i);
                    }
    std::vector<Family> out{f1, f2, f3, f4};
    const FrobeniusTriple &t = c.t;
    bool trivial_ideal = true;
    for (const auto &d : t.injectives()) trivial_ideal = trivial_ideal && t.backend().category().is_zero_object(d);
    if (t.backend().kind() == BackendKind::stable && trivial_ideal) out.push_back(ag);
    return out;
}

std::shared_ptr<TrContext> tr_context(const FrobeniusTriple &t, const VerifyBudget &budget)
{
    return std::make_shared<TrContext>(t, with_zero(t.backend().zero(), t.z().inventory), budget);
}

// Frobenius theory -----------------------------------------------------------------------------------------------

struct TheoryContext
{
    const TheoryInput &in;
    VerifyBudget budget;
    std::vector<std::vector<Module>> obj;

    mutable std::mutex mutex;
    mutable std::map<std::size_t, std::vector<CheckReport>> enlargement;

    const FrobeniusTriple &triple(const json &i) const { return *in.triples.at(i.at("triple").get<std::size_t>()); }
    const Module &at(const json &i, std::size_t k) const
    {
        return obj.at(i.at("triple").get<std::size_t>()).at(i.at("objects").at(k).get<std::size_t>());
    }
    Morphism map(const json &i, const char *key, std::size_t s, std::size_t d) const
    {
        return morphism_from(i.at(key), at(i, s), at(i, d));
    }
    const std::vector<CheckReport> &chain(std::size_t k) const
    {
        std::lock_guard lock(mutex);
        auto it = enlargement.find(k);
        if (it == enlargement.end()) {
            const auto &[small, large] = in.chains.at(k);
            it = enlargement.emplace(k, check_enlargement(*small, *large)).first;
        }
        return it->second;
    }
};

Outcome split_extension(const TheoryContext &c, const json &i)
{
    const Backend &b = c.triple(i).backend();
    const Module &a = c.at(i, 0), &d = c.at(i, 1);
    Extension x = b.biproduct_extension(a, d);
    if (auto v = b.validate(x); !v.ok) return Outcome::fail(v.message);
    const QuotientCategory &cat = b.category();
    if (!cat.is_null(x.e) || !cat.is_null(x.h)) return Outcome::fail("outer maps of the split extension are nonzero");
    // f must be a split mono and g a split epi, exactly.
    LinearSystem sys(cat);
    auto r = sys.unknown(x.b(), a);
    auto s = sys.unknown(d, x.b());
    sys.equation({sys.term_right(r, x.f)}, identity(a), false);
    sys.equation({sys.term_left(s, x.g)}, identity(d), false);
    if (!sys.solve()) return Outcome::fail("f is not a split mono or g is not a split epi");
    return Outcome::pass();
}

/// Runs over every solution of the factorization and reports the first one that breaks the property.
Outcome propagation(const TheoryContext &c, const json &i, bool sigma_side)
{
    const FrobeniusTriple &t = c.triple(i);
    const Backend &b = t.backend();
    Morphism f = c.map(i, "f", 0, 1);
    LinearSystem sys(b.category());
    std::optional<Morphism> known;
    std::size_t u;
    if (sigma_side) {
        known = c.map(i, "m", 0, 2);
        u = sys.unknown(c.at(i, 2), f.target);
        sys.equation({sys.term_right(u, *known)}, f);
    } else {
        known = c.map(i, "e", 2, 1);
        u = sys.unknown(f.source, c.at(i, 2));
        sys.equation({sys.term_left(u, *known)}, f);
    }
    auto sol = sys.solve();
    if (!sol) return Outcome::pass();
    std::string bad;
    Verdict v = search_affine(*sol, b.category().field(), c.budget.seed, c.budget.search_limit, c.budget.search_trials,
                              [&](const std::vector<Morphism> &x) {
                                  bool ok = sigma_side ? b.sigma_epic(x[0]) : b.omega_monic(x[0]);
                                  if (!ok) bad = to_json(x[0]).dump();
                                  return !ok;
                              });
    if (v == Verdict::yes)
        return Outcome::fail(std::string(sigma_side ? "e with e m = f is not Sigma-epic: " : "m with e m = f is not Omega-monic: ") + bad);
    if (v == Verdict::inconclusive) return Outcome::inconclusive("factorizations sampled; " + budget_detail(c.budget));
    return Outcome::pass();
}

Outcome sigma_propagation(const TheoryContext &c, const json &i) { return propagation(c, i, true); }
Outcome omega_propagation(const TheoryContext &c, const json &i) { return propagation(c, i, false); }

Outcome minimal_d(const TheoryContext &c, const json &i)
{
    const FrobeniusTriple &t = c.triple(i);
    FrobeniusReport rep = check_frobenius(t);
    if (!rep.frobenius) return Outcome::pass();
    const QuotientCategory &cat = t.backend().category();
    const auto &inj = t.injectives_of_z();
    if (!covered(cat, rep.minimal_d, inj) || !covered(cat, inj, rep.minimal_d))
        return Outcome::fail("reported minimal D differs from the relative injectives of Z");
    for (const auto &m : inj)
        if (!t.in_d(m)) return Outcome::fail("a relative injective of Z is missing from D");
    auto small = FrobeniusTriple::make(t.backend_ptr(), t.z(), {"I", inj});
    if (!check_frobenius(*small).frobenius) return Outcome::fail("(Z, relative injectives of Z) is not Frobenius");
    if (!covered(cat, small->injectives(), inj) || !covered(cat, inj, small->injectives()))
        return Outcome::fail("the minimal D has different relative injectives");
    return Outcome::pass();
}

Outcome chain_check(const TheoryContext &c, const json &i)
{
    const std::string id = i.at("check");
    for (const auto &r : c.chain(i.at("chain").get<std::size_t>()))
        if (r.id == id) {
            if (r.status == Status::pass) return Outcome::pass();
            return {r.status, r.detail + (r.witness.empty() ? "" : " " + r.witness.dump())};
        }
    throw consistency_error("enlargement report lacks " + id);
}

std::vector<Family> theory_families(const std::shared_ptr<TheoryContext> &cp)
{
    const TheoryContext &c = *cp;
    auto bind = [cp](Outcome (*fn)(const TheoryContext &, const json &)) {
        return [cp, fn](const json &i) { return fn(*cp, i); };
    };
    Family split{"split-extension", {}, bind(split_extension), "all inventory pairs"};
    Family sig{"sigma-epic-propagation", {}, bind(sigma_propagation), "Sigma-epic basis maps, every factorization"};
    Family om{"omega-monic-propagation", {}, bind(omega_propagation), "Omega-monic basis maps, every factorization"};
    Family mind{"minimal-D", {}, bind(minimal_d), "every declared triple"};
    std::set<const Backend *> seen;
    for (std::size_t k = 0; k < c.in.triples.size(); ++k) {
        const FrobeniusTriple &t = *c.in.triples[k];
        mind.instances.push_back({{"triple", k}});
        if (!seen.insert(&t.backend()).second) continue;
        const Backend &b = t.backend();
        const auto &obj = c.obj[k];
        const std::size_t n = obj.size();
        auto inst = [&](std::vector<std::size_t> idx) {
            return json{{"triple", k}, {"objects", idx}, {"names", names_of(obj, idx)}};
        };
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                split.instances.push_back(inst({x, y}));
                for (const auto &f : basis_and_zero(b.category(), obj[x], obj[y])) {
                    const bool epic = b.sigma_epic(f), monic = b.omega_monic(f);
                    for (std::size_t m = 0; m < n; ++m) {
                        if (epic)
                            for (const auto &u : basis_and_zero(b.category(), obj[x], obj[m])) {
                                json i = inst({x, y, m});
                                i["f"] = matrix_json(f.matrix);
                                i["m"] = matrix_json(u.matrix);
                                sig.instances.push_back(i);
                            }
                        if (monic)
                            for (const auto &u : basis_and_zero(b.category(), obj[m], obj[y])) {
                                json i = inst({x, y, m});
                                i["f"] = matrix_json(f.matrix);
                                i["e"] = matrix_json(u.matrix);
                                om.instances.push_back(i);
                            }
                    }
                }
            }
    }
    std::vector<Family> out{split, sig, om, mind};
    for (const char *id : {"enlargement-contains", "enlargement-injectives-agree", "enlargement-stays-frobenius"}) {
        Family f{id, {}, bind(chain_check), "every declared chain"};
        for (std::size_t k = 0; k < c.in.chains.size(); ++k) f.instances.push_back({{"chain", k}, {"check", id}});
        out.push_back(f);
    }
    return out;
}

std::shared_ptr<TheoryContext> theory_context(const TheoryInput &in, const VerifyBudget &budget)
{
    auto c = std::make_shared<TheoryContext>(in, budget);
    for (const auto &t : in.triples) c->obj.push_back(with_zero(t->backend().zero(), t->z().inventory));
    return c;
}

std::vector<CheckReport> frobenius_gate(const FrobeniusTriple &t)
{
    FrobeniusReport rep = check_frobenius(t);
    if (rep.frobenius) return {CheckReport::pass("frobenius", "triple is Frobenius", 1)};
    json failed = json::array();
    for (const auto &r : rep.checks)
        if (r.status != Status::pass) failed.push_back(r.id);
    return {CheckReport::fail("frobenius", "triple is not Frobenius; TR checks skipped", {{"failed_checks", failed}})};
}

}

std::vector<CheckReport> verify_TR_suite(const FrobeniusTriple &t, const VerifyBudget &budget)
{
    auto gate = frobenius_gate(t);
    if (gate[0].status != Status::pass) return gate;
    auto rs = run_all(tr_families(tr_context(t, budget)));
    rs.insert(rs.begin(), gate[0]);
    std::stable_sort(rs.begin(), rs.end(), [](const CheckReport &a, const CheckReport &b) { return a.id < b.id; });
    return rs;
}

CheckReport replay_TR_suite(const FrobeniusTriple &t, const CheckReport &failure, const VerifyBudget &budget)
{
    if (failure.id == "frobenius") return frobenius_gate(t)[0];
    return replay(tr_families(tr_context(t, budget)), failure);
}

std::vector<CheckReport> verify_frobenius_theory(const TheoryInput &in, const VerifyBudget &budget)
{
    return run_all(theory_families(theory_context(in, budget)));
}

CheckReport replay_frobenius_theory(const TheoryInput &in, const CheckReport &failure, const VerifyBudget &budget)
{
    return replay(theory_families(theory_context(in, budget)), failure);
}

}
