#pragma once

#include "stablecat/decompose.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace stablecat {

using Morphism = ModuleMorphism;

Morphism identity(const Module &m);
Morphism zero_morphism(const Module &src, const Module &tgt);
/// g after f; throws contract_error on a dimension mismatch.
Morphism operator*(const Morphism &g, const Morphism &f);
Morphism operator+(const Morphism &a, const Morphism &b);
Morphism operator-(const Morphism &a, const Morphism &b);
Morphism operator-(const Morphism &a);

/// A direct sum with typed structure maps.
struct Biproduct
{
    Module sum;
    std::vector<Module> parts;
    std::vector<Morphism> inj;
    std::vector<Morphism> proj;

    static Biproduct of(const std::vector<Module> &parts, const AlgebraPtr &a);
    /// sum_i inj_i * components_i : X -> sum
    Morphism into(const std::vector<Morphism> &components) const;
    /// sum_i components_i * proj_i : sum -> Y
    Morphism out_of(const std::vector<Morphism> &components) const;
};

/// Hom-space cached process-wide; safe from any thread.
std::shared_ptr<const HomSpace> cached_hom(const Module &m, const Module &n);

/// A module shrunk to its summands that survive in a quotient category.
struct Reduction
{
    Module object;
    /// object -> original
    Morphism section;
    /// original -> object;  retraction * section = id exactly
    Morphism retraction;
    bool conclusive = true;
};

struct IsoWitness
{
    Verdict verdict = Verdict::no;
    std::optional<Morphism> iso;
    std::optional<Morphism> inverse;
};

/// mod-A modulo the ideal of maps factoring through add(ideal_objects).  With no ideal objects this is mod-A.
class QuotientCategory
{
    AlgebraPtr algebra_;
    std::vector<Module> ideal_;
    std::string label_;
    std::uint64_t seed_;
    SearchBudget budget_;

    mutable std::mutex mutex_;
    mutable std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const std::vector<Matrix>>> null_cache_;
    mutable std::map<std::uint64_t, std::shared_ptr<const Decomposition>> decomposition_cache_;

    public:
    QuotientCategory(AlgebraPtr a, std::vector<Module> ideal_objects, std::string label, std::uint64_t seed = 1,
                     SearchBudget budget = {});

    const AlgebraPtr &algebra() const { return algebra_; }
    const Field &field() const { return algebra_->field(); }
    const std::vector<Module> &ideal_objects() const { return ideal_; }
    const std::string &label() const { return label_; }
    std::uint64_t seed() const { return seed_; }
    const SearchBudget &budget() const { return budget_; }

    std::shared_ptr<const HomSpace> hom(const Module &m, const Module &n) const { return cached_hom(m, n); }
    /// Basis of the maps M -> N factoring through the ideal objects.
    std::shared_ptr<const std::vector<Matrix>> null_basis(const Module &m, const Module &n) const;
    /// Hom basis elements spanning a complement of the null subspace.
    std::vector<Matrix> quotient_basis(const Module &m, const Module &n) const;
    std::size_t dim(const Module &m, const Module &n) const;

    bool is_null(const Morphism &f) const;
    /// Coefficients of f on quotient_basis(f.source, f.target).
    std::vector<elem_t> coordinates(const Morphism &f) const;
    bool equal(const Morphism &f, const Morphism &g) const { return is_null(f - g); }
    bool is_zero_object(const Module &m) const { return is_null(identity(m)); }

    std::shared_ptr<const Decomposition> decomposition(const Module &m) const;
    Reduction reduce(const Module &m) const;
    /// d with d*f = id and f*d = id modulo the ideal.
    std::optional<Morphism> inverse(const Morphism &f) const;
    IsoWitness isomorphism(const Module &m, const Module &n) const;
    /// Membership in add(inventory) after discarding summands that vanish here.
    Membership membership(const Module &x, const std::vector<Module> &inventory) const;
};

/// Unknown morphisms x_j : P_j -> Q_j and equations sum L x R (+ constants) = T, each holding either exactly or
/// modulo the ideal of a quotient category.
class LinearSystem
{
    public:
    struct Term
    {
        std::size_t unknown;
        Matrix left;
        Matrix right;
    };

    struct Solution
    {
        std::vector<Morphism> particular;
        /// Directions of the solution space that are nonzero modulo the ideal.
        std::vector<std::vector<Morphism>> directions;

        std::vector<Morphism> at(const std::vector<elem_t> &coeffs) const;
    };

    explicit LinearSystem(const QuotientCategory &cat) : cat_(cat) {}

    std::size_t unknown(const Module &src, const Module &tgt);
    /// left * x_j * right as a term of an equation whose two ends are src and tgt.
    Term term(std::size_t j, const Morphism &left, const Morphism &right) const;
    Term term_left(std::size_t j, const Morphism &left) const;
    Term term_right(std::size_t j, const Morphism &right) const;
    Term term_plain(std::size_t j) const;
    void equation(const Module &src, const Module &tgt, std::vector<Term> terms, const Matrix &rhs,
                  bool modulo_ideal = true);
    void equation(std::vector<Term> terms, const Morphism &rhs, bool modulo_ideal = true)
    {
        equation(rhs.source, rhs.target, std::move(terms), rhs.matrix, modulo_ideal);
    }

    std::optional<Solution> solve() const;

    private:
    struct Unknown
    {
        Module src, tgt;
        std::shared_ptr<const HomSpace> hom;
    };
    struct Equation
    {
        Module src, tgt;
        std::vector<Term> terms;
        Matrix rhs;
        bool modulo;
    };
    const QuotientCategory &cat_;
    std::vector<Unknown> unknowns_;
    std::vector<Equation> equations_;
};

/// Visit points of an affine solution space: the particular one, then every combination of the directions when
/// p^k is within the limit, else seeded random combinations.  Stops when visit returns true.
/// Returns yes if visit accepted some point, no if the whole space was exhausted, inconclusive otherwise.
template <class Visit>
Verdict search_affine(const LinearSystem::Solution &s, const Field &f, std::uint64_t seed, std::uint64_t limit,
                      std::size_t random_trials, Visit &&visit);

}

#include "stablecat/category_search.hpp"
