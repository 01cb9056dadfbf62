#include "workspace.hpp"

#include "stablecat/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace stablecat::cli {

namespace {

[[noreturn]] void invalid(const std::string &entity, const std::string &what)
{
    throw workspace_error(entity + ": " + what);
}

const json &need(const json &j, const char *key, const std::string &entity)
{
    if (!j.is_object() || !j.contains(key)) invalid(entity, std::string("missing \"") + key + "\"");
    return j.at(key);
}

std::string need_name(const json &j, const std::string &kind)
{
    const json &n = need(j, "name", kind);
    if (!n.is_string() || n.get<std::string>().empty()) invalid(kind, "\"name\" must be a non-empty string");
    return n.get<std::string>();
}

std::uint64_t need_uint(const json &j, const std::string &entity)
{
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) invalid(entity, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

Matrix read_matrix(const Field &f, const json &j, std::size_t rows, std::size_t cols, const std::string &entity)
{
    if (!j.is_array() || j.size() != rows) invalid(entity, "matrix must have " + std::to_string(rows) + " rows");
    Matrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json &row = j[i];
        if (!row.is_array() || row.size() != cols) invalid(entity, "matrix rows must have " + std::to_string(cols) + " entries");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!row[k].is_number_integer()) invalid(entity, "matrix entries must be integers");
            m(i, k) = f.reduce(row[k].get<std::int64_t>());
        }
    }
    return m;
}

struct AlgebraEntry
{
    AlgebraPtr algebra;
    bool truncated = false;
};

}

const Module &Workspace::module(const std::string &name) const
{
    for (const auto &m : modules)
        if (m.name() == name) return m;
    throw workspace_error("unknown module \"" + name + "\"");
}

const NamedBackend &Workspace::backend(const std::string &name) const
{
    for (const auto &b : backends)
        if (b.name == name) return b;
    throw workspace_error("unknown backend \"" + name + "\"");
}

const NamedTriple &Workspace::triple(const std::string &name) const
{
    if (name.empty()) {
        if (triples.empty()) throw workspace_error("the workspace declares no triples");
        return triples.front();
    }
    for (const auto &t : triples)
        if (t.name == name) return t;
    throw workspace_error("unknown triple \"" + name + "\"");
}

std::vector<Module> Workspace::modules_of(const AlgebraPtr &a) const
{
    std::vector<Module> out;
    for (const auto &m : modules)
        if (m.algebra() == a) out.push_back(m);
    return out;
}

TheoryInput Workspace::theory() const
{
    TheoryInput in;
    for (const auto &t : triples) in.triples.push_back(t.triple);
    for (const auto &[s, l] : chains) in.chains.emplace_back(triple(s).triple, triple(l).triple);
    return in;
}

Workspace parse_workspace(const std::string &text, const std::string &source, const LoadOptions &opts)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw workspace_error(source + ": " + e.what());
    }
    if (!j.is_object()) throw workspace_error(source + ": the workspace must be a JSON object");

    Workspace ws;
    ws.source = source;

    const json &fj = need(j, "field", "workspace");
    const json &pj = fj.is_object() ? need(fj, "characteristic", "field") : fj;
    if (!pj.is_number_integer()) invalid("field", "characteristic must be an integer");
    try {
        ws.field = Field(pj.get<std::int64_t>() > 0 ? pj.get<std::uint64_t>() : 0);
    } catch (const contract_error &e) {
        invalid("field", e.what());
    }
    const Field &f = ws.field;

    std::map<std::string, AlgebraEntry> algebras;
    for (const auto &aj : need(j, "algebras", "workspace")) {
        const std::string name = need_name(aj, "algebra");
        const std::string entity = "algebra '" + name + "'";
        if (algebras.count(name)) invalid(entity, "declared twice");
        AlgebraEntry e;
        try {
            if (aj.contains("truncated_polynomial")) {
                std::uint64_t n = need_uint(aj.at("truncated_polynomial"), entity);
                if (n == 0) invalid(entity, "truncated_polynomial needs n >= 1");
                e.algebra = std::make_shared<const Algebra>(Algebra::truncated_polynomial(name, f, n));
                e.truncated = true;
            } else {
                const json &cj = need(aj, "structure_constants", entity);
                const json &uj = need(aj, "unit", entity);
                std::vector<elem_t> unit;
                for (const auto &v : uj) unit.push_back(f.reduce(v.get<std::int64_t>()));
                std::vector<std::vector<std::vector<elem_t>>> c;
                for (const auto &a : cj) {
                    auto &ca = c.emplace_back();
                    for (const auto &b : a) {
                        auto &cb = ca.emplace_back();
                        for (const auto &v : b) cb.push_back(f.reduce(v.get<std::int64_t>()));
                    }
                }
                e.algebra = std::make_shared<const Algebra>(name, f, std::move(c), std::move(unit));
            }
        } catch (const contract_error &err) {
            invalid(entity, err.what());
        } catch (const json::exception &err) {
            invalid(entity, err.what());
        }
        if (auto d = e.algebra->validate(); !d.ok) invalid(entity, d.message);
        algebras.emplace(name, e);
        ws.algebras.emplace_back(name, e.algebra);
    }
    auto algebra = [&](const json &owner, const std::string &entity) -> const AlgebraEntry & {
        const json &n = need(owner, "algebra", entity);
        auto it = algebras.find(n.get<std::string>());
        if (it == algebras.end()) invalid(entity, "unknown algebra \"" + n.get<std::string>() + "\"");
        return it->second;
    };

    std::set<std::string> module_names;
    for (const auto &mj : need(j, "modules", "workspace")) {
        const std::string name = need_name(mj, "module");
        const std::string entity = "module '" + name + "'";
        if (!module_names.insert(name).second) invalid(entity, "declared twice");
        const AlgebraEntry &ae = algebra(mj, entity);
        const AlgebraPtr &a = ae.algebra;
        std::optional<Module> m;
        try {
            if (mj.value("regular", false)) {
                m = Module::regular(a, name);
            } else if (mj.contains("x")) {
                if (!ae.truncated) invalid(entity, "\"x\" is only accepted over truncated polynomial algebras");
                const json &xj = mj.at("x");
                const std::size_t d = xj.is_array() ? xj.size() : 0;
                Matrix x = read_matrix(f, xj, d, d, entity);
                std::vector<Matrix> act;
                Matrix pw = Matrix::identity(f, d);
                for (std::size_t i = 0; i < a->dim(); ++i) {
                    act.push_back(pw);
                    pw = pw * x;
                }
                m = Module(a, d, std::move(act), name);
            } else if (mj.contains("action")) {
                const json &acts = mj.at("action");
                if (!acts.is_array() || acts.size() != a->dim())
                    invalid(entity, "\"action\" needs one matrix per algebra basis element");
                const std::size_t d = acts[0].size();
                std::vector<Matrix> act;
                for (const auto &x : acts) act.push_back(read_matrix(f, x, d, d, entity));
                m = Module(a, d, std::move(act), name);
            } else {
                std::uint64_t d = need_uint(need(mj, "dim", entity), entity);
                if (d != 0) invalid(entity, "a nonzero module needs \"x\", \"action\" or \"regular\"");
                m = Module::zero(a).renamed(name);
            }
        } catch (const contract_error &err) {
            invalid(entity, err.what());
        }
        if (auto d = m->validate(); !d.ok) invalid(entity, d.message);
        ws.modules.push_back(*m);
        ws.module_algebra.push_back(a->name());
    }
    auto resolve = [&](const std::string &n, const std::string &entity) -> const Module & {
        for (const auto &m : ws.modules)
            if (m.name() == n) return m;
        invalid(entity, "unknown module \"" + n + "\"");
    };

    std::uint64_t seed = 1;
    if (opts.seed) seed = *opts.seed;
    else if (j.contains("seed")) seed = need_uint(j.at("seed"), "seed");
    else if (opts.environment_seed) seed = *opts.environment_seed;
    ws.budget.seed = seed;
    if (j.contains("budget")) {
        const json &bj = j.at("budget");
        if (bj.contains("enumeration_limit")) ws.budget.enumeration_limit = need_uint(bj.at("enumeration_limit"), "budget");
        if (bj.contains("samples")) ws.budget.samples = need_uint(bj.at("samples"), "budget");
        if (bj.contains("search_limit")) ws.budget.search_limit = need_uint(bj.at("search_limit"), "budget");
        if (bj.contains("search_trials")) ws.budget.search_trials = need_uint(bj.at("search_trials"), "budget");
    }
    if (opts.budget) {
        ws.budget.enumeration_limit = *opts.budget;
        ws.budget.search_limit = *opts.budget;
    }

    for (const auto &bj : j.value("backends", json::array())) {
        const std::string name = need_name(bj, "backend");
        const std::string entity = "backend '" + name + "'";
        for (const auto &b : ws.backends)
            if (b.name == name) invalid(entity, "declared twice");
        const AlgebraEntry &ae = algebra(bj, entity);
        const std::string kind = need(bj, "kind", entity).get<std::string>();
        BackendPtr b;
        try {
            if (kind == "abelian") b = Backend::abelian(ae.algebra, seed);
            else if (kind == "stable") b = Backend::stable(ae.algebra, seed);
            else invalid(entity, "kind must be \"abelian\" or \"stable\"");
        } catch (const contract_error &err) {
            invalid(entity, err.what());
        }
        ws.backends.push_back({name, ae.algebra->name(), b});
    }

    for (const auto &sj : j.value("subcategories", json::array())) {
        const std::string name = need_name(sj, "subcategory");
        const std::string entity = "subcategory '" + name + "'";
        for (const auto &s : ws.subcategories)
            if (s.name == name) invalid(entity, "declared twice");
        NamedSubcategory s{name, {}, {name, {}}};
        if (sj.contains("algebra")) s.algebra = algebra(sj, entity).algebra->name();
        for (const auto &oj : need(sj, "objects", entity)) {
            const Module &m = resolve(oj.get<std::string>(), entity);
            if (s.algebra.empty()) s.algebra = m.algebra()->name();
            if (m.algebra()->name() != s.algebra)
                invalid(entity, "module \"" + m.name() + "\" lives over a different algebra");
            s.spec.inventory.push_back(m);
        }
        if (s.algebra.empty()) invalid(entity, "an empty subcategory needs \"algebra\"");
        ws.subcategories.push_back(std::move(s));
    }
    auto subcategory = [&](const json &owner, const char *key, const std::string &entity) -> const NamedSubcategory & {
        const std::string n = need(owner, key, entity).get<std::string>();
        for (const auto &s : ws.subcategories)
            if (s.name == n) return s;
        invalid(entity, "unknown subcategory \"" + n + "\"");
    };

    for (const auto &tj : j.value("triples", json::array())) {
        const std::string name = need_name(tj, "triple");
        const std::string entity = "triple '" + name + "'";
        for (const auto &t : ws.triples)
            if (t.name == name) invalid(entity, "declared twice");
        const std::string bname = need(tj, "backend", entity).get<std::string>();
        const NamedBackend *nb = nullptr;
        for (const auto &b : ws.backends)
            if (b.name == bname) nb = &b;
        if (!nb) invalid(entity, "unknown backend \"" + bname + "\"");
        const NamedSubcategory &z = subcategory(tj, "Z", entity);
        const NamedSubcategory &d = subcategory(tj, "D", entity);
        if (z.algebra != nb->algebra || d.algebra != nb->algebra)
            invalid(entity, "Z and D must live over the backend's algebra");
        ws.triples.push_back({name, bname, FrobeniusTriple::make(nb->backend, z.spec, d.spec)});
    }

    for (const auto &cj : j.value("chains", json::array())) {
        const std::string small = need(cj, "small", "chain").get<std::string>();
        const std::string large = need(cj, "large", "chain").get<std::string>();
        const std::string entity = "chain '" + small + "' <= '" + large + "'";
        const NamedTriple *ts = nullptr, *tl = nullptr;
        for (const auto &t : ws.triples) {
            if (t.name == small) ts = &t;
            if (t.name == large) tl = &t;
        }
        if (!ts) invalid(entity, "unknown triple \"" + small + "\"");
        if (!tl) invalid(entity, "unknown triple \"" + large + "\"");
        if (ts->backend != tl->backend || ts->triple->z().label != tl->triple->z().label)
            invalid(entity, "both triples must share the backend and Z");
        ws.chains.emplace_back(small, large);
    }
    return ws;
}

Workspace load_workspace(const std::string &path, const LoadOptions &opts)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw workspace_error(path + ": cannot open file");
    std::ostringstream s;
    s << in.rdbuf();
    return parse_workspace(s.str(), path, opts);
}

std::string iso_class(const Workspace &ws, const QuotientCategory &cat, const Module &m)
{
    if (cat.is_zero_object(m)) return "0";
    auto named = [&](const Module &x) -> std::optional<std::string> {
        for (const auto &d : ws.modules)
            if (d.algebra() == x.algebra() && d.dim() > 0 && !cat.is_zero_object(d) &&
                cat.isomorphism(x, d).verdict == Verdict::yes)
                return d.name();
        return std::nullopt;
    };
    if (auto n = named(m)) return *n;
    auto dec = cat.decomposition(m);
    std::vector<std::string> parts;
    for (const auto &s : dec->summands) {
        if (cat.is_zero_object(s.module)) continue;
        auto n = named(s.module);
        parts.push_back(n ? *n : "unnamed(dim " + std::to_string(s.module.dim()) + ")");
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto &p : parts) out += (out.empty() ? "" : " + ") + p;
    return out.empty() ? "0" : out;
}

}
