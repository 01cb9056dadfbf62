#include "stablecat/error.hpp"
#include "stablecat/frobenius.hpp"

namespace stablecat {

namespace {

std::string name_of(const Module &m) { return m.name().empty() ? "dim " + std::to_string(m.dim()) : m.name(); }

bool member(const QuotientCategory &cat, const Module &m, const std::vector<Module> &inventory)
{
    Membership r = cat.membership(m, inventory);
    if (r.verdict == Verdict::inconclusive)
        throw inconclusive_error("membership of a module of dimension " + std::to_string(m.dim()) + " undecided");
    return r.verdict == Verdict::yes;
}

void require(bool ok, const std::string &identity)
{
    if (!ok) throw consistency_error("identity fails: " + identity);
}

}

Triangle FrobeniusTriple::cone(const Morphism &f) const
{
    auto px = injective_presentation(f.source);
    const auto &c = backend_->category();
    Biproduct bi = Biproduct::of({f.target, px->i}, backend_->algebra());
    Morphism fx = bi.into({f, -px->alpha()});
    auto ext = conflation_on(fx);
    if (!ext) throw consistency_error("cone: (f, -alpha) out of " + name_of(f.source) + " is not an inflation");
    Morphism p = -bi.proj[1];
    LinearSystem sys(c);
    auto q = sys.unknown(ext->c(), px->s);
    sys.equation({sys.term_right(q, ext->g)}, px->beta() * p);
    sys.equation({sys.term_left(q, px->gamma())}, ext->h);
    auto sol = sys.solve();
    if (!sol) throw consistency_error("cone: no comparison into the presentation of " + name_of(f.source));
    Triangle t{f, ext->g * bi.inj[0], sol->particular[0], {}};
    auto &w = t.witness;
    w.maps = {{"f_X", fx}, {"c_f", ext->g}, {"l_f", ext->h}, {"e_f", ext->e}, {"p", p}, {"q", t.h},
              {"i_Y", bi.inj[0]}};
    require(c.equal(p * fx, px->alpha()), "p f_X = alpha_X");
    require(c.equal(t.h * ext->g, px->beta() * p), "q c_f = beta_X p");
    require(c.equal(px->gamma() * t.h, ext->h), "gamma_X q = l_f");
    w.identities = {"p f_X = alpha_X", "q c_f = beta_X p", "gamma_X q = l_f", "g = c_f i_Y"};
    return t;
}

Witnessed FrobeniusTriple::is_distinguished(const Triangle &t) const
{
    Module sx = shift(t.f.source);
    if (!t.h.target.same_as(sx) || !t.f.target.same_as(t.g.source) || !t.g.target.same_as(t.h.source))
        return {Verdict::no, {}, "not a triangle shape X -> Y -> Z -> SX"};
    Triangle u = cone(t.f);
    LinearSystem sys(*stable_);
    auto c = sys.unknown(t.g.target, u.g.target);
    sys.equation({sys.term_right(c, t.g)}, u.g);
    sys.equation({sys.term_left(c, u.h)}, t.h);
    auto sol = sys.solve();
    if (!sol) return {Verdict::no, {}, "no morphism of triangles to the cone over (id, id)"};
    InvertibleSearch s = find_invertible(*stable_, *sol, 0);
    Witnessed w{s.verdict, {}, {}};
    if (s.verdict == Verdict::yes) w.witness = s.point[0];
    else if (s.verdict == Verdict::no) w.detail = "comparison maps to the cone exist but none is invertible";
    else w.detail = "no invertible comparison found within budget";
    return w;
}

Triangle FrobeniusTriple::rotate(const Triangle &t) const
{
    auto d = is_distinguished(t);
    if (!d) throw contract_error("rotate: triangle is not distinguished (" + d.detail + ")");
    const Module &x = t.f.source, &y = t.f.target;
    auto px = injective_presentation(x);
    auto py = injective_presentation(y);
    Triangle u = cone(t.f);
    const auto &c = backend_->category();
    Morphism k = -(t.f * px->delta());
    Extension conf{k, u.g, u.h, -backend_->psi(px->s, k)};
    if (auto v = backend_->validate(conf); !v.ok) throw consistency_error("rotate: shifted conflation invalid: " + v.message);
    LinearSystem sys(c);
    auto ui = sys.unknown(conf.b(), py->i);
    auto vi = sys.unknown(px->s, py->s);
    sys.equation({sys.term_right(ui, conf.f)}, py->alpha());
    sys.equation({sys.term_right(vi, conf.g), sys.term_left(ui, -py->beta())}, zero_morphism(conf.b(), py->s));
    sys.equation({sys.term_left(vi, py->gamma())}, conf.h);
    auto sol = sys.solve();
    if (!sol) throw consistency_error("rotate: no morphism of conflations into the presentation of " + name_of(y));
    Morphism sf = shift(t.f);
    Morphism v = sol->particular[1];
    require(stable_->equal(v, -sf), "S f = -v");
    Triangle r{t.g, t.h, -sf, {}};
    r.witness.maps = {{"k", k}, {"mu", conf.f}, {"nu", conf.g}, {"u", sol->particular[0]}, {"v", v},
                      {"c", *d.witness}};
    r.witness.identities = {"f_X delta_X + i_Y k = 0", "u mu = alpha_Y", "v nu = beta_Y u", "gamma_Y v = -psi(k)",
                            "S f = -v", "c g = mu", "nu c = h"};
    return r;
}

std::optional<Morphism> FrobeniusTriple::fill_in(const Triangle &t, const Triangle &u, const Morphism &x,
                                                 const Morphism &y) const
{
    if (!stable_->equal(y * t.f, u.f * x)) throw contract_error("fill_in: the square does not commute stably");
    LinearSystem sys(*stable_);
    auto z = sys.unknown(t.g.target, u.g.target);
    sys.equation({sys.term_right(z, t.g)}, u.g * y);
    sys.equation({sys.term_left(z, u.h)}, shift(x) * t.h);
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    return sol->particular[0];
}

OctahedronWitness FrobeniusTriple::octahedron(const Triangle &t_l, const Triangle &t_lp, const Triangle &t_f) const
{
    const Morphism &l = t_l.f, &m = t_l.g, &v = t_l.h;
    const Morphism &lp = t_lp.f, &mp = t_lp.g, &vp = t_lp.h;
    const Morphism &f = t_f.f, &g = t_f.g, &q = t_f.h;
    if (!l.source.same_as(f.source) || !lp.target.same_as(l.target) || !mp.target.same_as(f.target))
        throw contract_error("octahedron: the three triangles do not fit together");
    if (!stable_->equal(mp * l, f)) throw contract_error("octahedron: m' l differs from f");

    // Make m' l = f hold in C: f - m' l factors through alpha_X.
    auto px = injective_presentation(f.source);
    const auto &c = backend_->category();
    LinearSystem rect(c);
    auto om = rect.unknown(px->i, f.target);
    rect.equation({rect.term_right(om, px->alpha())}, f - mp * l);
    auto rs = rect.solve();
    if (!rs) throw consistency_error("octahedron: f - m' l does not factor through alpha_X");

    LinearSystem sys(*stable_);
    auto gp = sys.unknown(m.target, g.target);
    auto qp = sys.unknown(g.target, vp.target);
    sys.equation({sys.term_right(gp, m)}, g * mp);
    sys.equation({sys.term_right(qp, g)}, vp);
    sys.equation({sys.term_left(gp, q)}, v);
    sys.equation({sys.term_left(qp, shift(lp))}, -(shift(l) * q));
    auto sol = sys.solve();
    if (!sol) throw consistency_error("octahedron: the four identities have no common solution");
    Morphism fp = m * lp;
    std::optional<OctahedronWitness> found;
    Verdict verdict = search_affine(*sol, c.field(), c.seed(), c.budget().exhaustive_limit, c.budget().random_probes,
                                    [&](const std::vector<Morphism> &pt) {
                                        Triangle cand{fp, pt[0], pt[1], {}};
                                        auto w = is_distinguished(cand);
                                        if (!w) return false;
                                        cand.witness.maps = {{"c", *w.witness}};
                                        found = OctahedronWitness{pt[0], pt[1], cand, {}};
                                        return true;
                                    });
    if (verdict == Verdict::inconclusive) throw inconclusive_error("octahedron: no distinguished choice within budget");
    if (!found) throw consistency_error("octahedron: no solution of the identities is distinguished");
    found->witness.maps = {{"rho", px->alpha()}, {"omega", rs->particular[0]}, {"g'", found->g_prime},
                           {"q'", found->q_prime}};
    found->witness.identities = {"omega alpha_X = f - m' l", "g' m = g m'", "q' g = v'", "q g' = v",
                                 "S l' q' + S l q = 0"};
    return *found;
}

namespace {

/// Objects of `from` that are isomorphic to some object of `to`, compared in cat.
bool covered(const QuotientCategory &cat, const std::vector<Module> &from, const std::vector<Module> &to)
{
    for (const auto &m : from) {
        if (cat.is_zero_object(m)) continue;
        bool hit = false;
        for (const auto &n : to)
            if (cat.isomorphism(m, n).verdict == Verdict::yes) hit = true;
        if (!hit) return false;
    }
    return true;
}

std::vector<std::string> names(const std::vector<Module> &ms)
{
    std::vector<std::string> r;
    for (const auto &m : ms) r.push_back(name_of(m));
    return r;
}

/// Presentations for every inventory object of Z; fills the two reports.
bool enough(const FrobeniusTriple &t, std::vector<CheckReport> &out)
{
    bool ok = true;
    for (bool inj : {true, false}) {
        CheckTally tally(inj ? "enough-injectives" : "enough-projectives");
        for (const auto &x : t.z().inventory) {
            try {
                if (inj) t.injective_presentation(x);
                else t.projective_presentation(x);
                tally.pass();
            } catch (const contract_error &e) {
                tally.fail(e.what(), {{"object", name_of(x)}});
            }
        }
        ok = ok && !tally.failed();
        out.push_back(tally.report());
    }
    return ok;
}

bool same_objects(const QuotientCategory &cat, const std::vector<Module> &a, const std::vector<Module> &b)
{
    return covered(cat, a, b) && covered(cat, b, a);
}

}

FrobeniusReport check_frobenius(const FrobeniusTriple &t)
{
    FrobeniusReport r;
    const auto &cat = t.backend().category();
    CheckReport closed = is_extension_closed(t.backend(), t.z());
    r.checks.push_back(closed);

    CheckTally dz("D-in-Z");
    for (const auto &d : t.d().inventory) {
        if (t.in_z(d)) dz.pass();
        else dz.fail(name_of(d) + " is not in " + t.z().label, {{"object", name_of(d)}});
    }
    r.checks.push_back(dz.report());

    CheckTally ds("direct-summands");
    const auto &inv = t.d().inventory;
    for (std::size_t i = 0; i < inv.size(); ++i)
        for (std::size_t j = i; j < inv.size(); ++j) {
            Module sum = Biproduct::of({inv[i], inv[j]}, t.backend().algebra()).sum;
            auto dec = cat.decomposition(sum);
            bool ok = true;
            for (const auto &s : dec->summands)
                if (!cat.is_zero_object(s.module) && !t.in_d(s.module)) ok = false;
            if (ok) ds.pass();
            else ds.fail("a summand of " + name_of(inv[i]) + " + " + name_of(inv[j]) + " is not in " + t.d().label);
        }
    r.checks.push_back(ds.report("summands of sums of D objects lie in D; the literal reading (in Z) then holds too"));

    bool has_enough = enough(t, r.checks);

    bool ip = same_objects(cat, t.injectives(), t.projectives());
    json ipw = {{"I_D", names(t.injectives())}, {"P_D", names(t.projectives())}};
    r.checks.push_back(ip ? CheckReport::pass("I_D=P_D", "", t.injectives().size())
                          : CheckReport::fail("I_D=P_D", "relative injectives and projectives differ", ipw));

    std::vector<Module> cap;
    for (const auto &m : t.injectives_of_z())
        if (t.in_d(m)) cap.push_back(m);
    bool inter = same_objects(cat, t.injectives(), cap);
    r.checks.push_back(inter ? CheckReport::pass("I_D=I-cap-D")
                             : CheckReport::fail("I_D=I-cap-D", "I_D differs from I intersected with D", ipw));

    r.frobenius = closed.status == Status::pass && dz.report().status == Status::pass && has_enough && ip;
    r.minimal_d = t.injectives_of_z();
    if (r.frobenius) {
        auto minimal = FrobeniusTriple::make(t.backend_ptr(), t.z(), {"I(" + t.z().label + ")", r.minimal_d});
        std::vector<CheckReport> sub;
        bool ok = enough(*minimal, sub) && same_objects(cat, minimal->injectives(), minimal->projectives()) &&
                  same_objects(cat, minimal->injectives(), t.injectives());
        json w = {{"minimal_D", names(r.minimal_d)}};
        r.checks.push_back(ok ? CheckReport::pass("minimal-D", "D = I gives a Frobenius triple with the same I_D",
                                                  r.minimal_d.size())
                              : CheckReport::fail("minimal-D", "the relatively injective objects do not form a minimal D", w));
    }
    return r;
}

std::vector<CheckReport> check_enlargement(const FrobeniusTriple &small, const FrobeniusTriple &large)
{
    std::vector<CheckReport> out;
    const auto &cat = small.backend().category();
    CheckTally sub("enlargement-contains");
    for (const auto &d : small.d().inventory) {
        if (large.in_d(d)) sub.pass();
        else sub.fail(name_of(d) + " is not in " + large.d().label);
    }
    out.push_back(sub.report());
    json w = {{"small", names(small.injectives())}, {"large", names(large.injectives())}};
    std::vector<CheckReport> scratch;
    if (!enough(small, scratch)) {
        out.push_back(CheckReport::pass("enlargement-injectives-agree", "vacuous: the smaller triple lacks enough injectives"));
    } else {
        bool same = same_objects(cat, small.injectives(), large.injectives()) &&
                    same_objects(cat, small.projectives(), large.projectives());
        out.push_back(same ? CheckReport::pass("enlargement-injectives-agree")
                           : CheckReport::fail("enlargement-injectives-agree", "I_D' differs from I_D", w));
    }
    bool small_frob = check_frobenius(small).frobenius;
    bool large_frob = !small_frob || check_frobenius(large).frobenius;
    out.push_back(!small_frob ? CheckReport::pass("enlargement-stays-frobenius", "vacuous: the smaller triple is not Frobenius")
                  : large_frob ? CheckReport::pass("enlargement-stays-frobenius")
                               : CheckReport::fail("enlargement-stays-frobenius", "the larger triple is not Frobenius", w));
    return out;
}

namespace {

struct HomWitness
{
    bool zero = true;
    json witness;
};

HomWitness first_nonzero(const QuotientCategory &cat, const Module &m, const Module &n, const std::string &what)
{
    auto q = cat.quotient_basis(m, n);
    if (q.empty()) return {true, {}};
    return {false, {{"hom", what}, {"basis_element", to_json(Morphism{m, n, q[0]})}}};
}

/// For every X in Z a triangle X -a-> D -b-> Y -> Sigma X with a a left D-approximation, b a right
/// D-approximation and Y in Z; dually for every Y.
bool approximation_triangles(const Backend &b, const SubcategorySpec &z, const SubcategorySpec &d, json &witness)
{
    const auto &cat = b.category();
    auto factors = [&](const Morphism &through, const Morphism &target, bool left) {
        LinearSystem sys(cat);
        auto s = left ? sys.unknown(through.target, target.target) : sys.unknown(target.source, through.source);
        if (left) sys.equation({sys.term_right(s, through)}, target);
        else sys.equation({sys.term_left(s, through)}, target);
        return sys.solve().has_value();
    };
    auto in = [&](const Module &m, const SubcategorySpec &s) { return member(cat, m, s.inventory); };
    for (const auto &x : z.inventory) {
        std::vector<Module> parts;
        std::vector<Morphism> comps;
        for (const auto &dd : d.inventory)
            for (const auto &m : cat.quotient_basis(x, dd)) {
                parts.push_back(dd);
                comps.push_back({x, dd, m});
            }
        Biproduct bs = Biproduct::of(parts, b.algebra());
        Morphism a = parts.empty() ? zero_morphism(x, bs.sum) : bs.into(comps);
        RightTriangle t = b.complete_right(a);
        if (!in(t.g.target, z)) {
            witness = {{"object", name_of(x)}, {"side", "left"}, {"reason", "cone of the left approximation is not in Z"}};
            return false;
        }
        for (const auto &dd : d.inventory)
            for (const auto &m : cat.quotient_basis(dd, t.g.target))
                if (!factors(t.g, Morphism{dd, t.g.target, m}, false)) {
                    witness = {{"object", name_of(x)}, {"side", "left"}, {"reason", "D -> Y is not a right approximation"}};
                    return false;
                }
    }
    for (const auto &y : z.inventory) {
        std::vector<Module> parts;
        std::vector<Morphism> comps;
        for (const auto &dd : d.inventory)
            for (const auto &m : cat.quotient_basis(dd, y)) {
                parts.push_back(dd);
                comps.push_back({dd, y, m});
            }
        Biproduct bs = Biproduct::of(parts, b.algebra());
        Morphism bm = parts.empty() ? zero_morphism(bs.sum, y) : bs.out_of(comps);
        LeftTriangle t = b.complete_left(bm);
        if (!in(t.f.source, z)) {
            witness = {{"object", name_of(y)}, {"side", "right"}, {"reason", "fibre of the right approximation is not in Z"}};
            return false;
        }
        for (const auto &dd : d.inventory)
            for (const auto &m : cat.quotient_basis(t.f.source, dd))
                if (!factors(t.f, Morphism{t.f.source, dd, m}, true)) {
                    witness = {{"object", name_of(y)}, {"side", "right"}, {"reason", "X -> D is not a left approximation"}};
                    return false;
                }
    }
    return true;
}

}

MutationReport mutation_pair_check(const BackendPtr &b, const SubcategorySpec &z, const SubcategorySpec &d)
{
    if (b->kind() != BackendKind::stable) throw contract_error("mutation_pair_check needs a stable backend");
    MutationReport r;
    const auto &cat = b->category();

    // C(Omega Z, D) = 0 = C(D, Sigma Z)
    HomWitness bad{true, {}};
    for (const auto &zz : z.inventory)
        for (const auto &dd : d.inventory) {
            if (bad.zero) bad = first_nonzero(cat, b->omega(zz), dd, "C(Omega " + name_of(zz) + ", " + name_of(dd) + ")");
            if (bad.zero) bad = first_nonzero(cat, dd, b->sigma(zz), "C(" + name_of(dd) + ", Sigma " + name_of(zz) + ")");
        }
    r.hom_conditions = bad.zero;
    r.checks.push_back(r.hom_conditions
                           ? CheckReport::pass("hom-vanishing", d.inventory.empty() ? "vacuous: D = {0}" : "")
                           : CheckReport::fail("hom-vanishing", "a hom space between Z and D is nonzero", bad.witness));

    CheckReport closed = is_extension_closed(*b, z);
    if (closed.status == Status::pass) {
        auto t = FrobeniusTriple::make(b, z, d);
        FrobeniusReport fr = check_frobenius(*t);
        r.frobenius = fr.frobenius;
        r.checks.push_back(fr.frobenius ? CheckReport::pass("frobenius")
                                        : CheckReport::fail("frobenius", "the triple is not Frobenius"));
    } else {
        r.checks.push_back(CheckReport::fail("frobenius", "Z is not extension-closed: " + closed.detail, closed.witness));
    }
    r.first = r.frobenius && r.hom_conditions;

    // Second side: D in Z, C(Z, Sigma D) = 0 = C(D, Sigma Z), and approximation triangles both ways.
    json w;
    bool second = true;
    for (const auto &dd : d.inventory)
        if (second && !member(cat, dd, z.inventory)) {
            second = false;
            w = {{"reason", name_of(dd) + " is not in Z"}};
        }
    for (const auto &zz : z.inventory)
        for (const auto &dd : d.inventory) {
            if (!second) break;
            auto h1 = first_nonzero(cat, zz, b->sigma(dd), "C(" + name_of(zz) + ", Sigma " + name_of(dd) + ")");
            auto h2 = first_nonzero(cat, dd, b->sigma(zz), "C(" + name_of(dd) + ", Sigma " + name_of(zz) + ")");
            if (!h1.zero || !h2.zero) {
                second = false;
                w = h1.zero ? h2.witness : h1.witness;
            }
        }
    if (second) second = approximation_triangles(*b, z, d, w);
    r.second = second;
    r.checks.push_back(second ? CheckReport::pass("mutation-approximations")
                              : CheckReport::fail("mutation-approximations", "(Z, Z) is not a D-mutation pair", w));

    bool d_in_z = true;
    for (const auto &dd : d.inventory) d_in_z = d_in_z && member(cat, dd, z.inventory);
    r.hypotheses = closed.status == Status::pass && d_in_z;
    json sides = {{"frobenius_and_hom_vanishing", r.first}, {"mutation_pair", r.second}};
    if (!r.hypotheses)
        r.checks.push_back(CheckReport::pass("characterization-agrees", closed.status != Status::pass
                                                                           ? "vacuous: Z is not extension-closed"
                                                                           : "vacuous: D is not contained in Z"));
    else
        r.checks.push_back(r.first == r.second
                               ? CheckReport::pass("characterization-agrees", "", 1)
                               : CheckReport::fail("characterization-agrees", "the two sides disagree", sides));

    if (r.first) {
        std::vector<Module> killed;
        for (const auto &w2 : z.inventory) {
            bool ok = true;
            for (const auto &zz : z.inventory)
                ok = ok && cat.dim(b->omega(zz), w2) == 0 && cat.dim(w2, b->sigma(zz)) == 0;
            if (ok) killed.push_back(w2);
        }
        bool same = same_objects(cat, killed, d.inventory);
        r.checks.push_back(same ? CheckReport::pass("uniqueness")
                                : CheckReport::fail("uniqueness", "D differs from the objects killed by both conditions",
                                                    {{"killed", names(killed)}, {"D", names(d.inventory)}}));
    }
    return r;
}

}
