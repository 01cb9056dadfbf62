#pragma once

#include "stablecat/category.hpp"
#include "stablecat/ext.hpp"

#include <memory>
#include <string>

namespace stablecat {

enum class BackendKind { abelian, stable };

const char *to_string(BackendKind k);

/// A -f-> B -g-> C -h-> Sigma A
struct RightTriangle
{
    Morphism f, g, h;
};

/// Omega C -e-> A -f-> B -g-> C
struct LeftTriangle
{
    Morphism e, f, g;
};

/// Omega C -e-> A -f-> B -g-> C -h-> Sigma A with h = -psi(e).
struct Extension
{
    Morphism e, f, g, h;

    RightTriangle right() const { return {f, g, h}; }
    LeftTriangle left() const { return {e, f, g}; }
    const Module &a() const { return f.source; }
    const Module &b() const { return f.target; }
    const Module &c() const { return g.target; }
};

/// Outcome of a membership or comparison test, with the isomorphism found when there is one.
struct Witnessed
{
    Verdict verdict = Verdict::no;
    std::optional<Morphism> witness;
    std::string detail;

    explicit operator bool() const { return verdict == Verdict::yes; }
};

/// 0 -> X -mono-> E -epi-> full -> 0 (or 0 -> full -mono-> P -epi-> X -> 0) with E, P projective-injective;
/// the shifted object is full with its projective summands removed.
struct ShiftPresentation
{
    Module envelope;
    Morphism mono;
    Morphism epi;
    Module full;
    /// vector-space section of epi
    Matrix epi_section;
    Reduction reduced;
};

/// Deliberate corruptions used to show the verifier can fail.
struct FaultInjection
{
    /// psi negated on the first quotient basis vector of every hom space.
    bool psi_sign_flip = false;
    /// RTR2 rotation uses +Sigma f instead of -Sigma f.
    bool rotation_sign_dropped = false;
};

/// A pseudo-triangulated category with (Sigma, Omega, right triangles, left triangles, psi):
/// abelian mod-A with Sigma = Omega = 0, or the stable category of a self-injective algebra.
class Backend
{
    BackendKind kind_;
    AlgebraPtr algebra_;
    std::unique_ptr<QuotientCategory> cat_;
    Module regular_;
    Module zero_;
    FaultInjection faults_;

    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::shared_ptr<const ShiftPresentation>> sigma_cache_, omega_cache_;

    Backend(BackendKind kind, AlgebraPtr a, std::uint64_t seed, SearchBudget budget);

    public:
    static std::shared_ptr<const Backend> abelian(AlgebraPtr a, std::uint64_t seed = 1, SearchBudget budget = {});
    /// Throws contract_error unless A is self-injective.
    static std::shared_ptr<const Backend> stable(AlgebraPtr a, std::uint64_t seed = 1, SearchBudget budget = {});
    std::shared_ptr<const Backend> with_faults(FaultInjection faults) const;

    BackendKind kind() const { return kind_; }
    const AlgebraPtr &algebra() const { return algebra_; }
    const QuotientCategory &category() const { return *cat_; }
    const FaultInjection &faults() const { return faults_; }
    const Module &zero() const { return zero_; }
    const Module &regular() const { return regular_; }

    std::shared_ptr<const ShiftPresentation> sigma_presentation(const Module &x) const;
    std::shared_ptr<const ShiftPresentation> omega_presentation(const Module &x) const;
    Module sigma(const Module &x) const;
    Module omega(const Module &x) const;
    Morphism sigma(const Morphism &f) const;
    Morphism omega(const Morphism &f) const;
    /// psi_{A,B} : C(Omega A, B) -> C(A, Sigma B)
    Morphism psi(const Module &a, const Morphism &u) const;
    /// psi_{A,B}^{-1} : C(A, Sigma B) -> C(Omega A, B)
    Morphism psi_inverse(const Module &b, const Morphism &w) const;

    RightTriangle complete_right(const Morphism &f) const;
    LeftTriangle complete_left(const Morphism &g) const;
    /// Rotation as used by the right triangulation (honours the fault switch).
    RightTriangle rotate_right(const RightTriangle &t) const;
    LeftTriangle rotate_left(const LeftTriangle &t) const;

    /// Witness: the comparison map to the triangle built by complete_right.
    Witnessed in_right(const RightTriangle &t) const;
    Witnessed in_left(const LeftTriangle &t) const;
    Diagnostic validate(const Extension &x) const;

    bool is_sigma_null(const Morphism &f) const;
    bool is_omega_null(const Morphism &f) const;
    bool sigma_epic(const Morphism &f) const;
    bool omega_monic(const Morphism &f) const;

    /// Extension through an Omega-monic f.  Throws contract_error "not Omega-monic" otherwise.
    Extension extension_from_monic(const Morphism &f) const;
    /// Extension through a Sigma-epic g.  Throws contract_error "not Sigma-epic" otherwise.
    Extension extension_from_epic(const Morphism &g) const;
    Extension biproduct_extension(const Module &a, const Module &b) const;
    /// A realized extension class 0 -> x -> E -> z -> 0 of modules, read in this backend.
    Extension from_short_exact(const ShortExact &s) const;
};

using BackendPtr = std::shared_ptr<const Backend>;

struct OctahedronResult
{
    Morphism g_prime;
    Morphism h_prime;
    Extension ext_f_prime;
};

/// Given extensions on f : A -> B, l : A -> M (with m, n) and l' : A' -> M (with m', n') where m' l = f,
/// find g' : B' -> C and h' : C -> Sigma A' with h' g = n', h g' = n, g' m = g m', Sigma l h + Sigma l' h' = 0,
/// such that A' -(m l')-> B' -g'-> C -h'-> Sigma A' extends to an extension.
OctahedronResult octahedron_ext(const Backend &b, const Extension &ext_f, const Extension &ext_l,
                                const Extension &ext_lp);

/// Find c with (id, id, c) a morphism of right triangles from t to u; c need not be invertible.
std::optional<LinearSystem::Solution> right_comparisons(const Backend &b, const RightTriangle &t, const RightTriangle &u);

/// Search an affine solution space for a point whose component `index` is invertible modulo the ideal.
struct InvertibleSearch
{
    Verdict verdict = Verdict::no;
    std::vector<Morphism> point;
    std::optional<Morphism> inverse;
};
InvertibleSearch find_invertible(const QuotientCategory &cat, const LinearSystem::Solution &s, std::size_t index);

}
