#include "stablecat/category.hpp"

#include "stablecat/error.hpp"

#include <algorithm>

namespace stablecat {

Morphism identity(const Module &m) { return {m, m, Matrix::identity(m.field(), m.dim())}; }

Morphism zero_morphism(const Module &src, const Module &tgt) { return {src, tgt, Matrix(src.field(), tgt.dim(), src.dim())}; }

Morphism operator*(const Morphism &g, const Morphism &f)
{
    if (g.matrix.cols() != f.matrix.rows() || g.source.dim() != f.target.dim())
        throw contract_error("composition of morphisms with mismatched objects");
    return {f.source, g.target, g.matrix * f.matrix};
}

Morphism operator+(const Morphism &a, const Morphism &b)
{
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
        throw contract_error("sum of morphisms with mismatched objects");
    return {a.source, a.target, a.matrix + b.matrix};
}

Morphism operator-(const Morphism &a, const Morphism &b) { return a + (-b); }

Morphism operator-(const Morphism &a) { return {a.source, a.target, -a.matrix}; }

Biproduct Biproduct::of(const std::vector<Module> &parts, const AlgebraPtr &a)
{
    DirectSum ds = direct_sum(parts, a);
    Biproduct b{ds.sum, parts, {}, {}};
    for (std::size_t i = 0; i < parts.size(); ++i) {
        b.inj.push_back({parts[i], ds.sum, ds.injections[i]});
        b.proj.push_back({ds.sum, parts[i], ds.projections[i]});
    }
    return b;
}

Morphism Biproduct::into(const std::vector<Morphism> &components) const
{
    if (components.size() != parts.size() || components.empty())
        throw contract_error("Biproduct::into: wrong number of components");
    Morphism r = inj[0] * components[0];
    for (std::size_t i = 1; i < parts.size(); ++i) r = r + inj[i] * components[i];
    return r;
}

Morphism Biproduct::out_of(const std::vector<Morphism> &components) const
{
    if (components.size() != parts.size() || components.empty())
        throw contract_error("Biproduct::out_of: wrong number of components");
    Morphism r = components[0] * proj[0];
    for (std::size_t i = 1; i < parts.size(); ++i) r = r + components[i] * proj[i];
    return r;
}

namespace {

std::mutex hom_mutex;
std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::shared_ptr<const HomSpace>>> hom_table;

/// Rank of the stacked flattened matrices.
std::size_t span_rank(const std::vector<Matrix> &ms, const Field &f, std::size_t len)
{
    if (ms.empty() || len == 0) return 0;
    Matrix a(f, ms.size(), len);
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = 0; j < len; ++j) a(i, j) = ms[i].entries()[j];
    return rank(a);
}

}

std::shared_ptr<const HomSpace> cached_hom(const Module &m, const Module &n)
{
    const auto key = std::make_pair(m.fingerprint(), n.fingerprint());
    {
        std::lock_guard lock(hom_mutex);
        auto it = hom_table.find(key);
        if (it != hom_table.end())
            for (auto &h : it->second)
                if (h->source.same_as(m) && h->target.same_as(n)) return h;
    }
    auto h = std::make_shared<const HomSpace>(hom_space(m, n));
    std::lock_guard lock(hom_mutex);
    hom_table[key].push_back(h);
    return h;
}

QuotientCategory::QuotientCategory(AlgebraPtr a, std::vector<Module> ideal_objects, std::string label, std::uint64_t seed,
                                   SearchBudget budget)
    : algebra_(std::move(a)), ideal_(std::move(ideal_objects)), label_(std::move(label)), seed_(seed), budget_(budget)
{
    for (auto &g : ideal_)
        if (g.algebra() != algebra_) throw contract_error("ideal object '" + g.name() + "' lives over another algebra");
}

std::shared_ptr<const std::vector<Matrix>> QuotientCategory::null_basis(const Module &m, const Module &n) const
{
    const auto key = std::make_pair(m.fingerprint(), n.fingerprint());
    {
        std::lock_guard lock(mutex_);
        auto it = null_cache_.find(key);
        if (it != null_cache_.end()) return it->second;
    }
    std::vector<Matrix> comps;
    for (auto &g : ideal_) {
        auto a = hom(m, g);
        if (a->basis.empty()) continue;
        auto b = hom(g, n);
        for (auto &y : b->basis)
            for (auto &x : a->basis) comps.push_back(y * x);
    }
    auto res = std::make_shared<const std::vector<Matrix>>(linear_basis(comps));
    std::lock_guard lock(mutex_);
    null_cache_.emplace(key, res);
    return res;
}

std::vector<Matrix> QuotientCategory::quotient_basis(const Module &m, const Module &n) const
{
    auto nb = null_basis(m, n);
    std::vector<Matrix> all = *nb;
    const std::size_t base = all.size();
    for (auto &b : hom(m, n)->basis) all.push_back(b);
    auto indep = linear_basis(all);
    return {indep.begin() + static_cast<std::ptrdiff_t>(base), indep.end()};
}

std::size_t QuotientCategory::dim(const Module &m, const Module &n) const
{
    return hom(m, n)->dim() - null_basis(m, n)->size();
}

bool QuotientCategory::is_null(const Morphism &f) const
{
    if (f.matrix.is_zero()) return true;
    auto nb = null_basis(f.source, f.target);
    if (nb->empty()) return false;
    std::vector<Matrix> all = *nb;
    const std::size_t len = f.matrix.rows() * f.matrix.cols();
    const std::size_t r = span_rank(all, field(), len);
    all.push_back(f.matrix);
    return span_rank(all, field(), len) == r;
}

std::vector<elem_t> QuotientCategory::coordinates(const Morphism &f) const
{
    auto q = quotient_basis(f.source, f.target);
    auto nb = null_basis(f.source, f.target);
    const std::size_t len = f.matrix.rows() * f.matrix.cols();
    Matrix a(field(), len, q.size() + nb->size()), b(field(), len, 1);
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t k = 0; k < q.size(); ++k) a(i, k) = q[k].entries()[i];
        for (std::size_t k = 0; k < nb->size(); ++k) a(i, q.size() + k) = (*nb)[k].entries()[i];
        b(i, 0) = f.matrix.entries()[i];
    }
    auto s = solve_affine(a, b);
    if (!s) throw contract_error("coordinates: matrix is not a morphism between the given modules");
    std::vector<elem_t> c(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) c[k] = s->particular(k, 0);
    return c;
}

std::shared_ptr<const Decomposition> QuotientCategory::decomposition(const Module &m) const
{
    {
        std::lock_guard lock(mutex_);
        auto it = decomposition_cache_.find(m.fingerprint());
        if (it != decomposition_cache_.end() && it->second->module.same_as(m)) return it->second;
    }
    auto d = std::make_shared<const Decomposition>(decompose(m, seed_, budget_));
    std::lock_guard lock(mutex_);
    decomposition_cache_[m.fingerprint()] = d;
    return d;
}

Reduction QuotientCategory::reduce(const Module &m) const
{
    if (ideal_.empty()) return {m, identity(m), identity(m), true};
    auto d = decomposition(m);
    std::vector<const Summand *> kept;
    for (auto &s : d->summands)
        if (!is_zero_object(s.module)) kept.push_back(&s);
    if (kept.size() == d->summands.size()) return {m, identity(m), identity(m), d->conclusive};
    std::vector<Module> parts;
    for (auto *s : kept) parts.push_back(s->module);
    Biproduct b = Biproduct::of(parts, algebra_);
    Reduction r{b.sum, zero_morphism(b.sum, m), zero_morphism(m, b.sum), d->conclusive};
    for (std::size_t i = 0; i < kept.size(); ++i) {
        r.section = r.section + Morphism{kept[i]->module, m, kept[i]->injection} * b.proj[i];
        r.retraction = r.retraction + b.inj[i] * Morphism{m, kept[i]->module, kept[i]->projection};
    }
    return r;
}

std::optional<Morphism> QuotientCategory::inverse(const Morphism &f) const
{
    LinearSystem sys(*this);
    auto d = sys.unknown(f.target, f.source);
    sys.equation({sys.term_right(d, f)}, identity(f.source));
    sys.equation({sys.term_left(d, f)}, identity(f.target));
    auto s = sys.solve();
    if (!s) return std::nullopt;
    return s->particular[0];
}

IsoWitness QuotientCategory::isomorphism(const Module &m, const Module &n) const
{
    Reduction rm = reduce(m), rn = reduce(n);
    if (!rm.conclusive || !rn.conclusive) return {Verdict::inconclusive, {}, {}};
    if (rm.object.dim() != rn.object.dim()) return {Verdict::no, {}, {}};
    auto dm = decomposition(rm.object), dn = decomposition(rn.object);
    if (dm->summands.size() != dn->summands.size()) return {Verdict::no, {}, {}};
    Morphism f = zero_morphism(m, n);
    std::vector<bool> used(dn->summands.size(), false);
    bool unsure = false;
    for (std::size_t i = 0; i < dm->summands.size(); ++i) {
        const Summand &si = dm->summands[i];
        bool matched = false;
        for (std::size_t j = 0; j < dn->summands.size() && !matched; ++j) {
            if (used[j]) continue;
            const Summand &sj = dn->summands[j];
            auto iso = find_isomorphism(si.module, sj.module, seed_ + i, budget_);
            if (iso.verdict == Verdict::inconclusive) unsure = true;
            if (iso.verdict != Verdict::yes) continue;
            used[j] = matched = true;
            Morphism piece{rm.object, rn.object, sj.injection * *iso.iso * si.projection};
            f = f + rn.section * piece * rm.retraction;
        }
        if (!matched) return {unsure ? Verdict::inconclusive : Verdict::no, {}, {}};
    }
    auto g = inverse(f);
    if (!g) throw consistency_error("isomorphism: assembled block map is not invertible in " + label_);
    return {Verdict::yes, f, *g};
}

Membership QuotientCategory::membership(const Module &x, const std::vector<Module> &inventory) const
{
    Reduction r = reduce(x);
    if (!r.conclusive) return {Verdict::inconclusive, std::vector<std::size_t>(inventory.size(), 0), "inconclusive decomposition"};
    return add_membership(r.object, inventory, seed_, budget_);
}

std::size_t LinearSystem::unknown(const Module &src, const Module &tgt)
{
    unknowns_.push_back({src, tgt, cat_.hom(src, tgt)});
    return unknowns_.size() - 1;
}

LinearSystem::Term LinearSystem::term(std::size_t j, const Morphism &left, const Morphism &right) const
{
    const Unknown &u = unknowns_.at(j);
    if (left.source.dim() != u.tgt.dim() || right.target.dim() != u.src.dim())
        throw contract_error("LinearSystem::term: factors do not match the unknown");
    return {j, left.matrix, right.matrix};
}

LinearSystem::Term LinearSystem::term_left(std::size_t j, const Morphism &left) const
{
    return term(j, left, identity(unknowns_.at(j).src));
}

LinearSystem::Term LinearSystem::term_right(std::size_t j, const Morphism &right) const
{
    return term(j, identity(unknowns_.at(j).tgt), right);
}

LinearSystem::Term LinearSystem::term_plain(std::size_t j) const
{
    return term(j, identity(unknowns_.at(j).tgt), identity(unknowns_.at(j).src));
}

void LinearSystem::equation(const Module &src, const Module &tgt, std::vector<Term> terms, const Matrix &rhs,
                            bool modulo_ideal)
{
    if (rhs.rows() != tgt.dim() || rhs.cols() != src.dim())
        throw contract_error("LinearSystem::equation: right-hand side has the wrong shape");
    for (auto &t : terms)
        if (t.left.rows() != tgt.dim() || t.right.cols() != src.dim())
            throw contract_error("LinearSystem::equation: term does not match the equation's ends");
    equations_.push_back({src, tgt, std::move(terms), rhs, modulo_ideal});
}

std::vector<Morphism> LinearSystem::Solution::at(const std::vector<elem_t> &coeffs) const
{
    std::vector<Morphism> r = particular;
    for (std::size_t k = 0; k < directions.size(); ++k) {
        if (coeffs[k] == 0) continue;
        for (std::size_t j = 0; j < r.size(); ++j)
            r[j].matrix += directions[k][j].matrix.scaled(coeffs[k]);
    }
    return r;
}

std::optional<LinearSystem::Solution> LinearSystem::solve() const
{
    const Field &f = cat_.field();
    std::vector<std::size_t> offset;
    std::size_t cols = 0;
    for (auto &u : unknowns_) {
        offset.push_back(cols);
        cols += u.hom->dim();
    }
    const std::size_t unknown_cols = cols;
    std::vector<std::shared_ptr<const std::vector<Matrix>>> slack;
    std::size_t rows = 0;
    for (auto &e : equations_) {
        slack.push_back(e.modulo ? cat_.null_basis(e.src, e.tgt) : std::make_shared<const std::vector<Matrix>>());
        cols += slack.back()->size();
        rows += e.src.dim() * e.tgt.dim();
    }
    Matrix a(f, rows, cols), b(f, rows, 1);
    std::size_t r0 = 0, slack_col = unknown_cols;
    for (std::size_t ei = 0; ei < equations_.size(); ++ei) {
        const Equation &e = equations_[ei];
        const std::size_t len = e.src.dim() * e.tgt.dim();
        for (auto &t : e.terms) {
            const auto &basis = unknowns_[t.unknown].hom->basis;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                Matrix v = t.left * basis[k] * t.right;
                for (std::size_t i = 0; i < len; ++i)
                    a(r0 + i, offset[t.unknown] + k) = f.add(a(r0 + i, offset[t.unknown] + k), v.entries()[i]);
            }
        }
        for (auto &nb : *slack[ei]) {
            for (std::size_t i = 0; i < len; ++i) a(r0 + i, slack_col) = nb.entries()[i];
            ++slack_col;
        }
        for (std::size_t i = 0; i < len; ++i) b(r0 + i, 0) = e.rhs.entries()[i];
        r0 += len;
    }
    auto sol = solve_affine(a, b);
    if (!sol) return std::nullopt;

    auto assemble = [&](const Matrix &vec, std::size_t col) {
        std::vector<Morphism> xs;
        for (std::size_t j = 0; j < unknowns_.size(); ++j) {
            const auto &u = unknowns_[j];
            Matrix m(f, u.tgt.dim(), u.src.dim());
            for (std::size_t k = 0; k < u.hom->dim(); ++k)
                if (elem_t c = vec(offset[j] + k, col)) m += u.hom->basis[k].scaled(c);
            xs.push_back({u.src, u.tgt, std::move(m)});
        }
        return xs;
    };
    Solution s{assemble(sol->particular, 0), {}};

    // Keep directions independent modulo the ideal: seed the span with the null vectors of each unknown.
    std::vector<std::vector<elem_t>> seen;
    std::size_t total_len = 0;
    for (auto &u : unknowns_) total_len += u.src.dim() * u.tgt.dim();
    auto flatten_all = [&](const std::vector<Morphism> &xs) {
        std::vector<elem_t> v;
        v.reserve(total_len);
        for (auto &x : xs) v.insert(v.end(), x.matrix.entries().begin(), x.matrix.entries().end());
        return v;
    };
    std::size_t pos = 0;
    for (auto &u : unknowns_) {
        for (auto &nb : *cat_.null_basis(u.src, u.tgt)) {
            std::vector<elem_t> v(total_len, 0);
            std::copy(nb.entries().begin(), nb.entries().end(), v.begin() + static_cast<std::ptrdiff_t>(pos));
            seen.push_back(std::move(v));
        }
        pos += u.src.dim() * u.tgt.dim();
    }
    auto rank_of = [&](const std::vector<std::vector<elem_t>> &vs) {
        if (vs.empty() || total_len == 0) return std::size_t(0);
        Matrix m(f, vs.size(), total_len);
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = 0; j < total_len; ++j) m(i, j) = vs[i][j];
        return rank(m);
    };
    std::size_t r = rank_of(seen);
    for (std::size_t c = 0; c < sol->homogeneous_basis.cols(); ++c) {
        auto xs = assemble(sol->homogeneous_basis, c);
        seen.push_back(flatten_all(xs));
        std::size_t r2 = rank_of(seen);
        if (r2 > r) {
            r = r2;
            s.directions.push_back(std::move(xs));
        } else {
            seen.pop_back();
        }
    }
    return s;
}

}
