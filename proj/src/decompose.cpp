#include "stablecat/decompose.hpp"

#include "stablecat/error.hpp"
#include "stablecat/poly.hpp"

#include <algorithm>
#include <random>

namespace stablecat {

const char *to_string(Verdict v)
{
    switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::uint64_t capped_power(std::uint64_t p, std::size_t d, std::uint64_t cap)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < d; ++i) {
        r *= p;
        if (r > cap) return cap + 1;
    }
    return r;
}

namespace {

struct Split
{
    Matrix u;
    Matrix v;
};

enum class SplitStatus { split, indecomposable, inconclusive };

Matrix kernel_of(const Matrix &m) { return rref_full(m).kernel_basis; }

Matrix matrix_power(const Matrix &m, std::size_t e)
{
    Matrix r = Matrix::identity(m.field(), m.rows());
    for (std::size_t i = 0; i < e; ++i) r = r * m;
    return r;
}

/// Split along the primary components of phi's minimal polynomial, if it has more than one.
std::optional<Split> primary_split(const Matrix &phi, std::uint64_t seed)
{
    Poly mu = minimal_polynomial(phi);
    auto fs = factor(mu, seed);
    if (fs.size() < 2) return std::nullopt;
    const Field &f = phi.field();
    Poly first = Poly(f, {1});
    for (unsigned k = 0; k < fs[0].second; ++k) first = first * fs[0].first;
    Poly rest = Poly(f, {1});
    for (std::size_t i = 1; i < fs.size(); ++i)
        for (unsigned k = 0; k < fs[i].second; ++k) rest = rest * fs[i].first;
    return Split{kernel_of(evaluate(first, phi)), kernel_of(evaluate(rest, phi))};
}

/// Fitting decomposition when phi is neither nilpotent nor invertible.
std::optional<Split> fitting_split(const Matrix &phi)
{
    const std::size_t n = phi.rows();
    if (rank(phi) == n) return std::nullopt;
    Matrix pn = matrix_power(phi, n);
    if (pn.is_zero()) return std::nullopt;
    return Split{kernel_of(pn), column_space(pn)};
}

SplitStatus try_split(const Module &piece, std::mt19937_64 &gen, const SearchBudget &budget, Split &out)
{
    if (piece.dim() <= 1) return SplitStatus::indecomposable;
    HomSpace end = hom_space(piece, piece);
    if (end.dim() <= 1) return SplitStatus::indecomposable;
    const Field &f = piece.field();
    const auto p = f.characteristic();
    for (const auto &b : end.basis)
        if (auto s = primary_split(b, gen())) {
            out = std::move(*s);
            return SplitStatus::split;
        }
    for (std::size_t t = 0; t < budget.random_probes; ++t) {
        std::vector<elem_t> c(end.dim());
        for (auto &v : c) v = static_cast<elem_t>(gen() % p);
        if (auto s = primary_split(end.combination(c), gen())) {
            out = std::move(*s);
            return SplitStatus::split;
        }
    }
    std::uint64_t count = capped_power(p, end.dim(), budget.exhaustive_limit);
    if (count > budget.exhaustive_limit) return SplitStatus::inconclusive;
    // Local endomorphism ring <=> every element is nilpotent or invertible.
    std::vector<elem_t> c(end.dim(), 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t r = idx;
        for (auto &v : c) {
            v = static_cast<elem_t>(r % p);
            r /= p;
        }
        if (auto s = fitting_split(end.combination(c))) {
            out = std::move(*s);
            return SplitStatus::split;
        }
    }
    return SplitStatus::indecomposable;
}

bool module_less(const Summand &a, const Summand &b)
{
    if (a.module.dim() != b.module.dim()) return a.module.dim() < b.module.dim();
    for (std::size_t i = 0; i < a.module.actions().size(); ++i) {
        const auto &x = a.module.action(i).entries();
        const auto &y = b.module.action(i).entries();
        if (x != y) return x < y;
    }
    return false;
}

}

Decomposition decompose(const Module &m, std::uint64_t seed, SearchBudget budget)
{
    const Field &f = m.field();
    Decomposition d{m, {}, true};
    std::mt19937_64 gen(seed * 0x2545F4914F6CDD1Dull + 17);
    std::vector<Summand> work;
    if (m.dim() > 0) work.push_back({m, Matrix::identity(f, m.dim()), Matrix::identity(f, m.dim())});
    while (!work.empty()) {
        Summand piece = std::move(work.back());
        work.pop_back();
        Split s{Matrix(f, 0, 0), Matrix(f, 0, 0)};
        switch (try_split(piece.module, gen, budget, s)) {
        case SplitStatus::indecomposable: d.summands.push_back(std::move(piece)); break;
        case SplitStatus::inconclusive:
            d.conclusive = false;
            d.summands.push_back(std::move(piece));
            break;
        case SplitStatus::split: {
            Matrix w = s.u.hstack(s.v);
            auto winv = inverse(w);
            if (!winv) throw consistency_error("decompose: split components are not complementary");
            Matrix pu = winv->block(0, 0, s.u.cols(), w.rows());
            Matrix pv = winv->block(s.u.cols(), 0, s.v.cols(), w.rows());
            work.push_back({submodule(piece.module, s.u), piece.injection * s.u, pu * piece.projection});
            work.push_back({submodule(piece.module, s.v), piece.injection * s.v, pv * piece.projection});
            break;
        }
        }
    }
    std::stable_sort(d.summands.begin(), d.summands.end(), module_less);
    return d;
}

Diagnostic Decomposition::validate() const
{
    const Field &f = module.field();
    Matrix total(f, module.dim(), module.dim());
    for (std::size_t i = 0; i < summands.size(); ++i) {
        const auto &si = summands[i];
        if (!is_intertwiner(si.module, module, si.injection) || !is_intertwiner(module, si.module, si.projection))
            return Diagnostic::fail("summand " + std::to_string(i) + " maps are not module maps");
        for (std::size_t j = 0; j < summands.size(); ++j) {
            Matrix c = si.projection * summands[j].injection;
            if (i == j ? !c.is_identity() : !c.is_zero())
                return Diagnostic::fail("biproduct identity fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        total += si.injection * si.projection;
    }
    if (!total.is_identity()) return Diagnostic::fail("summand idempotents do not sum to the identity");
    return Diagnostic::pass();
}

IsoResult find_isomorphism(const Module &m, const Module &n, std::uint64_t seed, SearchBudget budget)
{
    if (m.algebra() != n.algebra()) throw contract_error("find_isomorphism: modules over different algebras");
    const Field &f = m.field();
    if (m.dim() != n.dim()) return {Verdict::no, std::nullopt};
    if (m.dim() == 0) return {Verdict::yes, Matrix(f, 0, 0)};
    HomSpace mn = hom_space(m, n);
    if (mn.dim() == 0) return {Verdict::no, std::nullopt};
    if (hom_space(n, m).dim() != mn.dim() || hom_space(m, m).dim() != mn.dim()) return {Verdict::no, std::nullopt};
    const auto p = f.characteristic();
    std::mt19937_64 gen(seed ^ 0xA5A5A5A5u);
    for (const auto &b : mn.basis)
        if (inverse(b)) return {Verdict::yes, b};
    for (std::size_t t = 0; t < budget.random_probes; ++t) {
        std::vector<elem_t> c(mn.dim());
        for (auto &v : c) v = static_cast<elem_t>(gen() % p);
        Matrix cand = mn.combination(c);
        if (inverse(cand)) return {Verdict::yes, cand};
    }
    std::uint64_t count = capped_power(p, mn.dim(), budget.exhaustive_limit);
    if (count > budget.exhaustive_limit) return {Verdict::inconclusive, std::nullopt};
    std::vector<elem_t> c(mn.dim(), 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t r = idx;
        for (auto &v : c) {
            v = static_cast<elem_t>(r % p);
            r /= p;
        }
        Matrix cand = mn.combination(c);
        if (rank(cand) == m.dim()) return {Verdict::yes, cand};
    }
    return {Verdict::no, std::nullopt};
}

Membership add_membership(const Module &x, const std::vector<Module> &inventory, std::uint64_t seed, SearchBudget budget)
{
    Membership res{Verdict::yes, std::vector<std::size_t>(inventory.size(), 0), {}};
    Decomposition dx = decompose(x, seed, budget);
    if (!dx.conclusive) return {Verdict::inconclusive, res.multiplicity, "decomposition of the object is inconclusive"};
    struct Piece
    {
        Module module;
        std::size_t owner;
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < inventory.size(); ++i) {
        Decomposition di = decompose(inventory[i], seed + i + 1, budget);
        if (!di.conclusive)
            return {Verdict::inconclusive, res.multiplicity, "decomposition of inventory object is inconclusive"};
        for (auto &s : di.summands) pieces.push_back({s.module, i});
    }
    for (std::size_t k = 0; k < dx.summands.size(); ++k) {
        bool found = false, unsure = false;
        for (auto &pc : pieces) {
            auto iso = find_isomorphism(dx.summands[k].module, pc.module, seed + k, budget);
            if (iso.verdict == Verdict::yes) {
                ++res.multiplicity[pc.owner];
                found = true;
                break;
            }
            if (iso.verdict == Verdict::inconclusive) unsure = true;
        }
        if (!found) {
            res.verdict = unsure ? Verdict::inconclusive : Verdict::no;
            res.detail = "summand " + std::to_string(k) + " of dimension " + std::to_string(dx.summands[k].module.dim()) +
                         " matches no inventory summand";
            return res;
        }
    }
    return res;
}

}
