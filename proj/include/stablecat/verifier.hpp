#pragma once

#include "stablecat/frobenius.hpp"

#include <utility>
#include <vector>

namespace stablecat {

struct VerifyBudget
{
    std::uint64_t seed = 1;
    /// Hom spaces with at most this many elements are enumerated completely; larger ones get the basis plus samples.
    std::uint64_t enumeration_limit = 1u << 16;
    std::size_t samples = 8;
    /// Affine solution spaces with at most this many points are searched completely, otherwise by random trials.
    std::uint64_t search_limit = 1u << 12;
    std::size_t search_trials = 64;
};

/// Every check is a family of instances.  A failing report's witness is the failing instance; feeding the report
/// back to the matching replay function re-evaluates exactly that instance.

/// Right and left triangulation axioms, gluing, the two adjoint-compatibility conditions and hom-exactness over
/// the inventory (the zero object is always added).
std::vector<CheckReport> verify_pseudotriangulation(const Backend &b, const std::vector<Module> &inventory,
                                                    const VerifyBudget &budget = {});
CheckReport replay_pseudotriangulation(const Backend &b, const std::vector<Module> &inventory,
                                       const CheckReport &failure, const VerifyBudget &budget = {});

/// TR1 to TR4 on Z / I_D over the inventory of Z.  When the backend is stable and I_D = 0, the triangles are also
/// compared with the backend's own.
std::vector<CheckReport> verify_TR_suite(const FrobeniusTriple &t, const VerifyBudget &budget = {});
CheckReport replay_TR_suite(const FrobeniusTriple &t, const CheckReport &failure, const VerifyBudget &budget = {});

struct TheoryInput
{
    std::vector<TriplePtr> triples;
    /// Pairs (small, large) with the same Z and D of small contained in D of large.
    std::vector<std::pair<TriplePtr, TriplePtr>> chains;
};

/// Split extensions, propagation of Sigma-epic and Omega-monic along factorizations, enlargement of D and the
/// minimal D.
std::vector<CheckReport> verify_frobenius_theory(const TheoryInput &in, const VerifyBudget &budget = {});
CheckReport replay_frobenius_theory(const TheoryInput &in, const CheckReport &failure,
                                    const VerifyBudget &budget = {});

}
