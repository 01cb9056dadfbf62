#pragma once

#include "stablecat/algebra.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace stablecat {

/// Probe budget for idempotent search and the exhaustive-search ceiling on |End|.
struct SearchBudget
{
    std::size_t random_probes = 64;
    std::uint64_t exhaustive_limit = std::uint64_t(1) << 16;
};

struct Summand
{
    Module module;
    /// module -> ambient
    Matrix injection;
    /// ambient -> module
    Matrix projection;
};

enum class Verdict { yes, no, inconclusive };

const char *to_string(Verdict v);

struct Decomposition
{
    Module module;
    std::vector<Summand> summands;
    /// inconclusive when some piece could be neither split nor certified indecomposable.
    bool conclusive = true;

    Diagnostic validate() const;
};

/// Split m into indecomposables by idempotent search in End(m).  Deterministic in seed.
Decomposition decompose(const Module &m, std::uint64_t seed, SearchBudget budget = {});

/// p^d capped at cap+1 (so comparisons against the exhaustive limit never overflow).
std::uint64_t capped_power(std::uint64_t p, std::size_t d, std::uint64_t cap);

struct IsoResult
{
    Verdict verdict = Verdict::no;
    /// m -> n, present when verdict is yes.
    std::optional<Matrix> iso;
};

/// Dimension filters, then hom dimensions both ways, then invertible-element search.
IsoResult find_isomorphism(const Module &m, const Module &n, std::uint64_t seed, SearchBudget budget = {});

struct Membership
{
    Verdict verdict = Verdict::no;
    /// One entry per inventory object.
    std::vector<std::size_t> multiplicity;
    std::string detail;
};

/// Is x in add(inventory)?
Membership add_membership(const Module &x, const std::vector<Module> &inventory, std::uint64_t seed,
                          SearchBudget budget = {});

}
