#include "commands.hpp"

#include "stablecat/decompose.hpp"
#include "stablecat/error.hpp"
#include "stablecat/ext.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace stablecat::cli {

namespace {

struct Context
{
    const Workspace &ws;
    const CommandArgs &args;
    json result = json::object();
    std::vector<CheckReport> checks;
    bool has_checks = false;
};

QuotientCategory module_category(const Workspace &ws, const AlgebraPtr &a)
{
    return QuotientCategory(a, {}, "mod", ws.budget.seed);
}

std::string name(const Workspace &ws, const QuotientCategory &cat, const Module &m) { return iso_class(ws, cat, m); }

/// The chosen basis element of the stable hom space, or the zero map when that space is zero.
Morphism pick(const QuotientCategory &cat, const Module &x, const Module &y, std::size_t k, const char *flag)
{
    auto q = cat.quotient_basis(x, y);
    if (q.empty()) {
        if (k == 0) return zero_morphism(x, y);
        throw contract_error(std::string(flag) + ": the stable hom space is zero");
    }
    if (k >= q.size())
        throw contract_error(std::string(flag) + " " + std::to_string(k) + " is out of range; the stable hom space has dimension " +
                             std::to_string(q.size()));
    return {x, y, q[k]};
}

const Module &need_module(const Workspace &ws, const std::string &n, const char *flag)
{
    if (n.empty()) throw contract_error(std::string("missing ") + flag);
    return ws.module(n);
}

json triangle_json(const Workspace &ws, const QuotientCategory &cat, const Triangle &t)
{
    return {{"objects",
             {name(ws, cat, t.f.source), name(ws, cat, t.f.target), name(ws, cat, t.g.target), name(ws, cat, t.h.target)}},
            {"f", to_json(t.f)},
            {"g", to_json(t.g)},
            {"h", to_json(t.h)}};
}

CheckReport from_witnessed(const std::string &id, const Witnessed &w)
{
    if (w) return CheckReport::pass(id, "", 1);
    if (w.verdict == Verdict::no) return CheckReport::fail(id, w.detail);
    return CheckReport::inconclusive(id, w.detail);
}

void cmd_validate(Context &c)
{
    const Workspace &ws = c.ws;
    json algebras = json::array(), modules = json::array(), backends = json::array(), subs = json::array(),
         triples = json::array(), chains = json::array();
    for (const auto &[n, a] : ws.algebras) algebras.push_back({{"name", n}, {"dim", a->dim()}});
    for (std::size_t i = 0; i < ws.modules.size(); ++i)
        modules.push_back({{"name", ws.modules[i].name()}, {"algebra", ws.module_algebra[i]}, {"dim", ws.modules[i].dim()}});
    for (const auto &b : ws.backends)
        backends.push_back({{"name", b.name}, {"algebra", b.algebra}, {"kind", to_string(b.backend->kind())}});
    for (const auto &s : ws.subcategories) {
        json objs = json::array();
        for (const auto &m : s.spec.inventory) objs.push_back(m.name());
        subs.push_back({{"name", s.name}, {"algebra", s.algebra}, {"objects", objs}});
    }
    for (const auto &t : ws.triples)
        triples.push_back({{"name", t.name}, {"backend", t.backend}, {"Z", t.triple->z().label}, {"D", t.triple->d().label}});
    for (const auto &[s, l] : ws.chains) chains.push_back({{"small", s}, {"large", l}});
    c.result = {{"field", ws.field.characteristic()}, {"algebras", algebras}, {"modules", modules}, {"backends", backends},
                {"subcategories", subs}, {"triples", triples}, {"chains", chains}};
}

void cmd_hom(Context &c)
{
    const Module &x = need_module(c.ws, c.args.source, "--source");
    const Module &y = need_module(c.ws, c.args.target, "--target");
    if (x.algebra() != y.algebra()) throw contract_error("--source and --target live over different algebras");
    auto h = hom_space(x, y);
    json basis = json::array();
    for (const auto &m : h.basis) basis.push_back(to_json(m));
    c.result = {{"source", x.name()}, {"target", y.name()}, {"dim", h.dim()}, {"basis", basis}};
}

void cmd_decompose(Context &c)
{
    const Module &m = need_module(c.ws, c.args.object, "--object");
    SearchBudget sb;
    sb.exhaustive_limit = c.ws.budget.search_limit;
    sb.random_probes = c.ws.budget.search_trials;
    Decomposition d = decompose(m, c.ws.budget.seed, sb);
    auto cat = module_category(c.ws, m.algebra());
    json summands = json::array();
    for (const auto &s : d.summands) summands.push_back({{"dim", s.module.dim()}, {"iso_class", name(c.ws, cat, s.module)}});
    c.result = {{"object", m.name()}, {"summands", summands}};
    c.has_checks = true;
    c.checks.push_back(d.conclusive ? CheckReport::pass("decomposition", "", 1)
                                    : CheckReport::inconclusive("decomposition", "some summand could be neither split nor "
                                                                                 "certified indecomposable"));
    if (auto v = d.validate(); !v.ok) c.checks.push_back(CheckReport::fail("decomposition-valid", v.message));
    else c.checks.push_back(CheckReport::pass("decomposition-valid", "", 1));
}

void cmd_ext1(Context &c)
{
    const Module &z = need_module(c.ws, c.args.source, "--source");
    const Module &x = need_module(c.ws, c.args.target, "--target");
    if (x.algebra() != z.algebra()) throw contract_error("--source and --target live over different algebras");
    Ext1 e(z, x);
    auto cat = module_category(c.ws, z.algebra());
    json classes = json::array();
    std::vector<elem_t> coeffs(e.dim(), 0);
    for (std::size_t k = 0; k <= e.dim(); ++k) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        if (k > 0) coeffs[k - 1] = 1;
        ShortExact s = e.realize(coeffs);
        classes.push_back({{"class", coeffs}, {"middle_iso_class", name(c.ws, cat, s.middle)}, {"middle_dim", s.middle.dim()}});
    }
    c.result = {{"source", z.name()}, {"target", x.name()}, {"dim", e.dim()}, {"classes", classes}};
}

const FrobeniusTriple &triple(Context &c) { return *c.ws.triple(c.args.triple).triple; }

void cmd_stable_hom(Context &c)
{
    const FrobeniusTriple &t = triple(c);
    const Module &x = need_module(c.ws, c.args.source, "--source");
    const Module &y = need_module(c.ws, c.args.target, "--target");
    json basis = json::array();
    for (const auto &m : t.stable().quotient_basis(x, y)) basis.push_back(to_json(m));
    c.result = {{"triple", c.ws.triple(c.args.triple).name},
                {"source", x.name()},
                {"target", y.name()},
                {"dim", basis.size()},
                {"basis", basis}};
}

void cmd_shift(Context &c)
{
    const FrobeniusTriple &t = triple(c);
    const Module &x = need_module(c.ws, c.args.object, "--object");
    const auto &cat = t.stable();
    json r = {{"triple", c.ws.triple(c.args.triple).name}, {"object", x.name()}, {"direction", c.args.direction}};
    if (c.args.direction == "S") {
        auto p = t.injective_presentation(x);
        r["dim"] = p->s.dim();
        r["iso_class"] = name(c.ws, cat, p->s);
        r["presentation"] = {{"injective", name(c.ws, t.backend().category(), p->i)}, {"injective_dim", p->i.dim()}, {"alpha", to_json(p->alpha())},
                             {"beta", to_json(p->beta())}};
    } else if (c.args.direction == "S*") {
        auto p = t.projective_presentation(x);
        r["dim"] = p->k.dim();
        r["iso_class"] = name(c.ws, cat, p->k);
        r["presentation"] = {{"projective", name(c.ws, t.backend().category(), p->p)}, {"projective_dim", p->p.dim()},
                             {"iota", to_json(p->conflation.f)}, {"beta", to_json(p->conflation.g)}};
    } else {
        throw contract_error("--direction must be S or S*");
    }
    c.result = r;
}

Morphism first_map(Context &c)
{
    const FrobeniusTriple &t = triple(c);
    return pick(t.stable(), need_module(c.ws, c.args.source, "--source"), need_module(c.ws, c.args.target, "--target"),
                c.args.basis, "--basis");
}

void cmd_cone(Context &c)
{
    const FrobeniusTriple &t = triple(c);
    Morphism f = first_map(c);
    Triangle u = t.cone(f);
    c.result = {{"triple", c.ws.triple(c.args.triple).name}, {"triangle", triangle_json(c.ws, t.stable(), u)}};
    c.has_checks = true;
    c.checks.push_back(from_witnessed("distinguished", t.is_distinguished(u)));
}

void cmd_rotate(Context &c)
{
    const FrobeniusTriple &t = triple(c);
    Morphism f = first_map(c);
    Triangle r = t.rotate(t.cone(f));
    c.result = {{"triple", c.ws.triple(c.args.triple).name}, {"triangle", triangle_json(c.ws, t.stable(), r)}};
    c.has_checks = true;
    c.checks.push_back(t.stable().equal(r.h, -t.shift(f)) ? CheckReport::pass("rotation-sign", "", 1)
                                                          : CheckReport::fail("rotation-sign", "the rotation does not end with -S f"));
    c.checks.push_back(from_witnessed("distinguished", t.is_distinguished(r)));
}

void cmd_fill_in(Context &c)
{
    const FrobeniusTriple &t = triple(c);
    const auto &cat = t.stable();
    Morphism f = first_map(c);
    const std::string &s2 = c.args.source2.empty() ? c.args.source : c.args.source2;
    const std::string &t2 = c.args.target2.empty() ? c.args.target : c.args.target2;
    Morphism fp = pick(cat, need_module(c.ws, s2, "--source2"), need_module(c.ws, t2, "--target2"), c.args.basis2, "--basis2");
    Triangle u = t.cone(f), v = t.cone(fp);
    LinearSystem sq(cat);
    auto x = sq.unknown(f.source, fp.source);
    auto y = sq.unknown(f.target, fp.target);
    sq.equation({sq.term_right(y, f), sq.term_left(x, -fp)}, zero_morphism(f.source, fp.target));
    auto squares = sq.solve();
    if (!squares) throw consistency_error("homogeneous square system has no solution");
    CheckTally tally("fill-in");
    json fills = json::array();
    for (const auto &xy : squares->directions) {
        auto z = t.fill_in(u, v, xy[0], xy[1]);
        json sq_json = {{"x", to_json(xy[0])}, {"y", to_json(xy[1])}};
        if (!z) {
            tally.fail("no fill-in for a commuting square", sq_json);
            continue;
        }
        if (!cat.equal(*z * u.g, v.g * xy[1]) || !cat.equal(t.shift(xy[0]) * u.h, v.h * *z)) {
            sq_json["z"] = to_json(*z);
            tally.fail("the fill-in does not make both squares commute", sq_json);
            continue;
        }
        tally.pass();
        sq_json["z"] = to_json(*z);
        fills.push_back(sq_json);
    }
    c.result = {{"triple", c.ws.triple(c.args.triple).name},
                {"first", triangle_json(c.ws, cat, u)},
                {"second", triangle_json(c.ws, cat, v)},
                {"squares", squares->directions.size()},
                {"fill_ins", fills}};
    c.has_checks = true;
    c.checks.push_back(tally.report("one fill-in per basis square"));
}

void cmd_octahedron(Context &c)
{
    const FrobeniusTriple &t = triple(c);
    const auto &cat = t.stable();
    Morphism l = first_map(c);
    const Module &xp = need_module(c.ws, c.args.source2, "--source2");
    Morphism lp = pick(cat, xp, l.target, c.args.basis2, "--basis2");
    Triangle tl = t.cone(l), tlp = t.cone(lp);
    Triangle tf = t.cone(tlp.g * l);
    OctahedronWitness o = t.octahedron(tl, tlp, tf);
    std::vector<std::pair<std::string, bool>> ids = {
        {"g' m = g m'", cat.equal(o.g_prime * tl.g, tf.g * tlp.g)},
        {"q' g = v'", cat.equal(o.q_prime * tf.g, tlp.h)},
        {"q g' = v", cat.equal(tf.h * o.g_prime, tl.h)},
        {"S l' q' + S l q = 0", cat.is_null(t.shift(lp) * o.q_prime + t.shift(l) * tf.h)},
        {"f' = m l'", cat.equal(o.t_f_prime.f, tl.g * lp)},
    };
    json failed = json::array();
    for (const auto &[id, ok] : ids)
        if (!ok) failed.push_back(id);
    c.result = {{"triple", c.ws.triple(c.args.triple).name},
                {"t_l", triangle_json(c.ws, cat, tl)},
                {"t_lp", triangle_json(c.ws, cat, tlp)},
                {"t_f", triangle_json(c.ws, cat, tf)},
                {"t_f_prime", triangle_json(c.ws, cat, o.t_f_prime)},
                {"g_prime", to_json(o.g_prime)},
                {"q_prime", to_json(o.q_prime)}};
    c.has_checks = true;
    c.checks.push_back(failed.empty() ? CheckReport::pass("octahedron-identities", "", ids.size())
                                      : CheckReport::fail("octahedron-identities", "identities fail", {{"failed", failed}}));
    c.checks.push_back(from_witnessed("distinguished", t.is_distinguished(o.t_f_prime)));
}

json names(const Workspace &ws, const QuotientCategory &cat, const std::vector<Module> &ms)
{
    json out = json::array();
    for (const auto &m : ms) out.push_back(name(ws, cat, m));
    return out;
}

void cmd_frobenius_check(Context &c)
{
    const NamedTriple &nt = c.ws.triple(c.args.triple);
    const FrobeniusTriple &t = *nt.triple;
    FrobeniusReport r = check_frobenius(t);
    const auto &mod = t.backend().category();
    c.result = {{"triple", nt.name},
                {"frobenius", r.frobenius},
                {"minimal_D", names(c.ws, mod, r.minimal_d)},
                {"injectives", names(c.ws, mod, t.injectives())},
                {"projectives", names(c.ws, mod, t.projectives())},
                {"summand_closure_reading", "summands of objects of D lie in D"}};
    c.has_checks = true;
    c.checks = r.checks;
}

void cmd_mutation_check(Context &c)
{
    const NamedTriple &nt = c.ws.triple(c.args.triple);
    const FrobeniusTriple &t = *nt.triple;
    MutationReport r = mutation_pair_check(t.backend_ptr(), t.z(), t.d());
    json conditions = json::array();
    c.has_checks = true;
    for (const auto &ch : r.checks) {
        if (ch.id == "characterization-agrees" || ch.id == "uniqueness") c.checks.push_back(ch);
        else conditions.push_back(to_json(ch));
    }
    c.result = {{"triple", nt.name},
                {"hypotheses", r.hypotheses},
                {"hom_conditions", r.hom_conditions},
                {"hom_conditions_vacuous", t.d().inventory.empty()},
                {"frobenius", r.frobenius},
                {"frobenius_and_hom_vanishing", r.first},
                {"mutation_pair", r.second},
                {"conditions", conditions}};
}

void cmd_verify_axioms(Context &c)
{
    json sections = json::array();
    c.has_checks = true;
    for (const auto &b : c.ws.backends) {
        if (!c.args.backend.empty() && b.name != c.args.backend) continue;
        auto reports = verify_pseudotriangulation(*b.backend, c.ws.modules_of(b.backend->algebra()), c.ws.budget);
        sections.push_back({{"backend", b.name}, {"checks", to_json(reports)}});
        for (auto r : reports) {
            r.id = b.name + ":" + r.id;
            c.checks.push_back(std::move(r));
        }
    }
    if (!c.args.backend.empty() && sections.empty()) c.ws.backend(c.args.backend);
    c.result = {{"backends", sections}};
}

void cmd_verify_tr(Context &c)
{
    const NamedTriple &nt = c.ws.triple(c.args.triple);
    c.has_checks = true;
    c.checks = verify_TR_suite(*nt.triple, c.ws.budget);
    c.result = {{"triple", nt.name}};
}

void cmd_verify_theory(Context &c)
{
    c.has_checks = true;
    c.checks = verify_frobenius_theory(c.ws.theory(), c.ws.budget);
    json triples = json::array();
    for (const auto &t : c.ws.triples) triples.push_back(t.name);
    c.result = {{"triples", triples}, {"chains", c.ws.chains.size()}};
}

using Handler = void (*)(Context &);

const std::map<std::string, Handler> &handlers()
{
    static const std::map<std::string, Handler> h = {
        {"validate", cmd_validate},
        {"hom", cmd_hom},
        {"decompose", cmd_decompose},
        {"ext1", cmd_ext1},
        {"stable-hom", cmd_stable_hom},
        {"shift", cmd_shift},
        {"cone", cmd_cone},
        {"rotate", cmd_rotate},
        {"fill-in", cmd_fill_in},
        {"octahedron", cmd_octahedron},
        {"frobenius-check", cmd_frobenius_check},
        {"mutation-check", cmd_mutation_check},
        {"verify-axioms", cmd_verify_axioms},
        {"verify-tr", cmd_verify_tr},
        {"verify-theory", cmd_verify_theory},
    };
    return h;
}

}

const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto &[k, v] : handlers()) n.push_back(k);
        return n;
    }();
    return names;
}

int exit_code(Status s)
{
    switch (s) {
    case Status::pass: return 0;
    case Status::fail: return 1;
    case Status::inconclusive: return 2;
    }
    return 3;
}

CommandResult run_command(const Workspace &ws, const CommandArgs &args)
{
    auto it = handlers().find(args.command);
    if (it == handlers().end()) throw contract_error("unknown command \"" + args.command + "\"");
    Context c{ws, args};
    it->second(c);

    CommandResult out;
    out.status = c.has_checks ? overall(c.checks) : Status::pass;
    json budget = {{"enumeration_limit", ws.budget.enumeration_limit},
                   {"samples", ws.budget.samples},
                   {"search_limit", ws.budget.search_limit},
                   {"search_trials", ws.budget.search_trials}};
    out.report = {{"command", args.command},
                  {"seed", ws.budget.seed},
                  {"budget", budget},
                  {"status", to_string(out.status)},
                  {"checks", to_json(c.checks)},
                  {"result", c.result}};

    std::ostringstream s;
    s << args.command << ": " << to_string(out.status) << "\n";
    for (const auto &r : c.checks) {
        s << "  " << r.id << ": " << to_string(r.status);
        if (r.instances) s << " (" << r.instances << " instances)";
        if (!r.detail.empty()) s << " - " << r.detail;
        s << "\n";
    }
    if (args.command == "shift") s << "  S" << (args.direction == "S*" ? "*" : "") << " " << args.object << " = "
                                   << c.result.value("iso_class", "") << "\n";
    if (args.command == "mutation-check" && c.result.value("hom_conditions_vacuous", false))
        s << "  hom conditions vacuous: D = {0}\n";
    out.summary = s.str();
    return out;
}

}
