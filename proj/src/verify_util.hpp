#pragma once

#include "stablecat/verifier.hpp"

#include <functional>

namespace stablecat::verify {

struct Outcome
{
    Status status = Status::pass;
    std::string detail;

    static Outcome pass() { return {}; }
    static Outcome fail(std::string d) { return {Status::fail, std::move(d)}; }
    static Outcome inconclusive(std::string d) { return {Status::inconclusive, std::move(d)}; }
};

using Evaluator = std::function<Outcome(const json &instance)>;

/// A check id with its instances and the evaluator shared by the run and by replays.
struct Family
{
    std::string id;
    std::vector<json> instances;
    Evaluator evaluate;
    std::string pass_detail;
};

CheckReport run(const Family &f);
CheckReport replay(const std::vector<Family> &families, const CheckReport &failure);
/// Sorted by id.
std::vector<CheckReport> run_all(const std::vector<Family> &families);

/// The zero object followed by the inventory, duplicates removed.
std::vector<Module> with_zero(const Module &zero, const std::vector<Module> &inventory);

json matrix_json(const Matrix &m);
Morphism morphism_from(const json &j, const Module &src, const Module &tgt);

/// All classes of C(x, y) in the category when there are at most budget.enumeration_limit of them, else the basis
/// plus seeded samples.  `sampled` is set when enumeration was not complete.
std::vector<Morphism> enumerate(const QuotientCategory &cat, const Module &x, const Module &y,
                                const VerifyBudget &budget, std::uint64_t salt, bool *sampled = nullptr);
/// The zero map followed by the quotient basis.
std::vector<Morphism> basis_and_zero(const QuotientCategory &cat, const Module &x, const Module &y);

/// Matrix of u -> u o f from C(f.target, e) to C(f.source, e) in quotient coordinates.
Matrix precomposition(const QuotientCategory &cat, const Morphism &f, const Module &e);
/// Matrix of u -> f o u from C(e, f.source) to C(e, f.target).
Matrix postcomposition(const QuotientCategory &cat, const Morphism &f, const Module &e);
/// Is V_in -a-> V_mid -b-> V_out exact at V_mid?  dim_mid is needed when a or b has no rows or columns.
bool exact_at(const Matrix &a, const Matrix &b, std::size_t dim_mid);

/// Applies f to each direction of a homogeneous solution space; existence statements that are linear in the point
/// then hold on the whole space.  Returns the first outcome that is not a pass.
Outcome for_each_direction(const LinearSystem::Solution &s, const std::function<Outcome(const std::vector<Morphism> &)> &f);

std::string budget_detail(const VerifyBudget &b);

}
