#include "verify_util.hpp"

#include "stablecat/error.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace stablecat::verify {

CheckReport run(const Family &f)
{
    CheckTally tally(f.id);
    for (const auto &inst : f.instances) {
        Outcome o;
        try {
            o = f.evaluate(inst);
        } catch (const inconclusive_error &e) {
            o = Outcome::inconclusive(e.what());
        } catch (const std::exception &e) {
            o = Outcome::fail(std::string("exception: ") + e.what());
        }
        switch (o.status) {
        case Status::pass: tally.pass(); break;
        case Status::fail: tally.fail(o.detail, inst); break;
        case Status::inconclusive: tally.inconclusive(o.detail); break;
        }
    }
    return tally.report(f.pass_detail);
}

CheckReport replay(const std::vector<Family> &families, const CheckReport &failure)
{
    for (const auto &f : families) {
        if (f.id != failure.id) continue;
        Outcome o;
        try {
            o = f.evaluate(failure.witness);
        } catch (const inconclusive_error &e) {
            o = Outcome::inconclusive(e.what());
        } catch (const std::exception &e) {
            o = Outcome::fail(std::string("exception: ") + e.what());
        }
        CheckReport r{f.id, o.status, o.detail, failure.witness, 1};
        return r;
    }
    throw contract_error("replay: unknown check id \"" + failure.id + "\"");
}

std::vector<CheckReport> run_all(const std::vector<Family> &families)
{
    std::vector<CheckReport> out;
    for (const auto &f : families) out.push_back(run(f));
    std::stable_sort(out.begin(), out.end(), [](const CheckReport &a, const CheckReport &b) { return a.id < b.id; });
    return out;
}

std::vector<Module> with_zero(const Module &zero, const std::vector<Module> &inventory)
{
    std::vector<Module> out{zero};
    for (const auto &m : inventory)
        if (std::none_of(out.begin(), out.end(), [&](const Module &o) { return o.same_as(m); })) out.push_back(m);
    return out;
}

json matrix_json(const Matrix &m) { return m.to_nested(); }

Morphism morphism_from(const json &j, const Module &src, const Module &tgt)
{
    std::vector<elem_t> v;
    const Field &f = src.field();
    for (const auto &row : j)
        for (const auto &e : row) v.push_back(f.reduce(e.get<std::int64_t>()));
    if (v.size() != src.dim() * tgt.dim()) throw contract_error("witness matrix has the wrong shape");
    return {src, tgt, Matrix::unflatten(f, tgt.dim(), src.dim(), v)};
}

std::vector<Morphism> enumerate(const QuotientCategory &cat, const Module &x, const Module &y,
                                const VerifyBudget &budget, std::uint64_t salt, bool *sampled)
{
    auto basis = cat.quotient_basis(x, y);
    const Field &f = cat.field();
    const std::uint64_t p = f.characteristic();
    const std::uint64_t total = capped_power(p, basis.size(), budget.enumeration_limit);
    std::vector<Morphism> out;
    auto combine = [&](const std::vector<elem_t> &c) {
        Matrix m(f, y.dim(), x.dim());
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (c[k]) m += basis[k].scaled(c[k]);
        return Morphism{x, y, std::move(m)};
    };
    std::vector<elem_t> c(basis.size(), 0);
    if (total <= budget.enumeration_limit) {
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::uint64_t r = idx;
            for (auto &e : c) {
                e = static_cast<elem_t>(r % p);
                r /= p;
            }
            out.push_back(combine(c));
        }
        return out;
    }
    if (sampled) *sampled = true;
    out.push_back(zero_morphism(x, y));
    for (const auto &b : basis) out.push_back({x, y, b});
    std::mt19937_64 gen(budget.seed * 0x9e3779b97f4a7c15ULL + salt);
    for (std::size_t s = 0; s < budget.samples; ++s) {
        for (auto &e : c) e = static_cast<elem_t>(gen() % p);
        out.push_back(combine(c));
    }
    return out;
}

std::vector<Morphism> basis_and_zero(const QuotientCategory &cat, const Module &x, const Module &y)
{
    std::vector<Morphism> out{zero_morphism(x, y)};
    for (auto &b : cat.quotient_basis(x, y)) out.push_back({x, y, b});
    return out;
}

Matrix precomposition(const QuotientCategory &cat, const Morphism &f, const Module &e)
{
    std::vector<std::vector<elem_t>> cols;
    for (const auto &q : cat.quotient_basis(f.target, e)) cols.push_back(cat.coordinates(Morphism{f.target, e, q} * f));
    return Matrix::from_columns(cat.field(), cat.dim(f.source, e), cols);
}

Matrix postcomposition(const QuotientCategory &cat, const Morphism &f, const Module &e)
{
    std::vector<std::vector<elem_t>> cols;
    for (const auto &q : cat.quotient_basis(e, f.source)) cols.push_back(cat.coordinates(f * Morphism{e, f.source, q}));
    return Matrix::from_columns(cat.field(), cat.dim(e, f.target), cols);
}

bool exact_at(const Matrix &a, const Matrix &b, std::size_t dim_mid)
{
    if (a.rows() != dim_mid || b.cols() != dim_mid) throw consistency_error("exact_at: shape mismatch");
    if (!(b * a).is_zero()) return false;
    return rank(a) + rank(b) == dim_mid;
}

Outcome for_each_direction(const LinearSystem::Solution &s,
                           const std::function<Outcome(const std::vector<Morphism> &)> &f)
{
    for (const auto &d : s.directions) {
        Outcome o = f(d);
        if (o.status != Status::pass) return o;
    }
    return Outcome::pass();
}

std::string budget_detail(const VerifyBudget &b)
{
    std::ostringstream s;
    s << "budget exhausted: search_limit=" << b.search_limit << " search_trials=" << b.search_trials
      << " seed=" << b.seed;
    return s.str();
}

}
