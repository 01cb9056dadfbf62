#pragma once

#include "stablecat/pseudotri.hpp"
#include "stablecat/report.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace stablecat {

/// A full additive subcategory given by indecomposable generators; membership is add(inventory).
struct SubcategorySpec
{
    std::string label;
    std::vector<Module> inventory;
};

/// Omega S -delta-> X -alpha-> I -beta-> S -gamma-> Sigma X with I relatively injective.
struct InjectivePresentation
{
    Module x, i, s;
    Extension conflation;

    const Morphism &delta() const { return conflation.e; }
    const Morphism &alpha() const { return conflation.f; }
    const Morphism &beta() const { return conflation.g; }
    const Morphism &gamma() const { return conflation.h; }
};

/// Omega X -e-> K -iota-> P -beta-> X -h-> Sigma K with P relatively projective; K represents S* X.
struct ProjectivePresentation
{
    Module x, p, k;
    Extension conflation;
};

/// Named morphisms produced by a construction, with the identities they were checked against.
struct FillWitness
{
    std::map<std::string, Morphism> maps;
    std::vector<std::string> identities;

    const Morphism &at(const std::string &name) const;
    json to_json() const;
};

/// X -f-> Y -g-> Z -h-> SX in Z/I_D, where SX is the object of the stored injective presentation of X.
struct Triangle
{
    Morphism f, g, h;
    FillWitness witness;
};

struct OctahedronWitness
{
    Morphism g_prime;
    Morphism q_prime;
    Triangle t_f_prime;
    FillWitness witness;
};

/// Does every realized extension between inventory objects have its middle term in add(Z)?
CheckReport is_extension_closed(const Backend &b, const SubcategorySpec &z);

/// (C, Z, D) for a backend C.  Relative injectives and projectives are found on construction;
/// presentations are computed once per object and cached.
class FrobeniusTriple
{
    BackendPtr backend_;
    SubcategorySpec z_, d_;
    std::vector<Module> inj_z_, proj_z_, inj_d_, proj_d_;
    std::unique_ptr<QuotientCategory> stable_;

    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::shared_ptr<const InjectivePresentation>> inj_cache_;
    mutable std::map<std::uint64_t, std::shared_ptr<const ProjectivePresentation>> proj_cache_;

    FrobeniusTriple(BackendPtr b, SubcategorySpec z, SubcategorySpec d);

    public:
    static std::shared_ptr<const FrobeniusTriple> make(BackendPtr b, SubcategorySpec z, SubcategorySpec d);

    const Backend &backend() const { return *backend_; }
    const BackendPtr &backend_ptr() const { return backend_; }
    const SubcategorySpec &z() const { return z_; }
    const SubcategorySpec &d() const { return d_; }
    /// Inventory objects of Z that are relatively injective (resp. projective); the minimal choice of D.
    const std::vector<Module> &injectives_of_z() const { return inj_z_; }
    const std::vector<Module> &projectives_of_z() const { return proj_z_; }
    /// I_D and P_D as sub-inventories of D.
    const std::vector<Module> &injectives() const { return inj_d_; }
    const std::vector<Module> &projectives() const { return proj_d_; }
    /// Z / I_D.
    const QuotientCategory &stable() const { return *stable_; }

    bool in_z(const Module &m) const;
    bool in_d(const Module &m) const;
    /// The conflation through f when f is an inflation of Z.
    std::optional<Extension> conflation_on(const Morphism &f) const;
    /// The conflation ending in g when g is a deflation of Z.
    std::optional<Extension> conflation_ending(const Morphism &g) const;

    /// Throws contract_error "not enough injectives" when no inflation into add(I_D) exists.
    std::shared_ptr<const InjectivePresentation> injective_presentation(const Module &x) const;
    std::shared_ptr<const ProjectivePresentation> projective_presentation(const Module &x) const;

    Module shift(const Module &x) const { return injective_presentation(x)->s; }
    Module coshift(const Module &x) const { return projective_presentation(x)->k; }
    /// S f from a lift chosen by seed (0 picks the particular solution).
    Morphism shift(const Morphism &f, std::uint64_t seed = 0) const;
    Morphism coshift(const Morphism &f, std::uint64_t seed = 0) const;
    /// The comparison X -> S* S X induced by the two conflations ending in S X.
    Morphism unit(const Module &x) const;
    /// The comparison S S* X -> X.
    Morphism counit(const Module &x) const;

    /// Every map M -> N factoring through I_D factors through alpha_M.
    bool factor_subspace_consistent(const Module &m, const Module &n) const;

    Triangle cone(const Morphism &f) const;
    Witnessed is_distinguished(const Triangle &t) const;
    Triangle rotate(const Triangle &t) const;
    /// z with z g = g' y and S(x) h = h' z; throws contract_error when y f != f' x.
    std::optional<Morphism> fill_in(const Triangle &t, const Triangle &u, const Morphism &x, const Morphism &y) const;
    /// t_l : X -l-> M -m-> B' -v-> SX, t_lp : X' -l'-> M -m'-> Y -v'-> SX', t_f : X -f-> Y -g-> C -q-> SX with m' l = f.
    OctahedronWitness octahedron(const Triangle &t_l, const Triangle &t_lp, const Triangle &t_f) const;
};

using TriplePtr = std::shared_ptr<const FrobeniusTriple>;

struct FrobeniusReport
{
    bool frobenius = false;
    std::vector<CheckReport> checks;
    /// The minimal D: the relatively injective objects of Z.
    std::vector<Module> minimal_d;
};

/// Extension-closure, D in Z, (DS), enough injectives and projectives, I_D = P_D, and the minimal D.
FrobeniusReport check_frobenius(const FrobeniusTriple &t);

/// Relative injectives of D' agree with those of D (D in D' in Z), and the larger triple is Frobenius too.
std::vector<CheckReport> check_enlargement(const FrobeniusTriple &small, const FrobeniusTriple &large);

struct MutationReport
{
    /// Z extension-closed and D in Z: the setting in which the two sides are claimed equivalent.
    bool hypotheses = false;
    bool hom_conditions = false;
    bool frobenius = false;
    /// Frobenius with both hom conditions.
    bool first = false;
    /// Approximation triangles in both directions with the rigidity conditions.
    bool second = false;
    std::vector<CheckReport> checks;
};

/// Compare the two sides of the mutation-pair characterization on a stable backend.
MutationReport mutation_pair_check(const BackendPtr &b, const SubcategorySpec &z, const SubcategorySpec &d);

}
