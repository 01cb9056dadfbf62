#pragma once

#include "stablecat/matrix.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stablecat {

/// Outcome of a structural validation: pass, or the first violated identity.
struct Diagnostic
{
    bool ok = true;
    std::string message;

    static Diagnostic pass() { return {}; }
    static Diagnostic fail(std::string m) { return {false, std::move(m)}; }
};

/// Finite-dimensional associative unital algebra given by structure constants b_i b_j = sum_k c[i][j][k] b_k.
class Algebra
{
    std::string name_;
    Field field_;
    std::size_t dim_;
    std::vector<std::vector<std::vector<elem_t>>> c_;
    std::vector<elem_t> unit_;
    std::vector<Matrix> left_mult_;
    std::vector<std::size_t> generators_;

    public:
    Algebra(std::string name, Field f, std::vector<std::vector<std::vector<elem_t>>> structure_constants,
            std::vector<elem_t> unit);

    /// F_p[x]/(x^n) on the basis 1, x, ..., x^(n-1).
    static Algebra truncated_polynomial(std::string name, Field f, std::size_t n);

    const std::string &name() const { return name_; }
    const Field &field() const { return field_; }
    std::size_t dim() const { return dim_; }
    elem_t constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[i][j][k]; }
    const std::vector<elem_t> &unit() const { return unit_; }
    /// Matrix of left multiplication by b_i.
    const Matrix &left_mult(std::size_t i) const { return left_mult_[i]; }
    Matrix right_mult(std::size_t i) const;
    std::vector<elem_t> multiply(const std::vector<elem_t> &a, const std::vector<elem_t> &b) const;
    /// Basis indices generating the algebra together with 1; intertwining with these suffices.
    const std::vector<std::size_t> &generators() const { return generators_; }

    Diagnostic validate() const;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Left module: one action matrix per algebra basis element.
class Module
{
    AlgebraPtr algebra_;
    std::size_t dim_ = 0;
    std::vector<Matrix> action_;
    std::string name_;
    std::uint64_t fingerprint_ = 0;

    public:
    Module(AlgebraPtr a, std::size_t dim, std::vector<Matrix> action, std::string name = {});

    static Module zero(AlgebraPtr a);
    static Module regular(AlgebraPtr a, std::string name = {});
    /// D(A) = Hom_k(A, k) with the transposed right action; the injective cogenerator.
    static Module dual_regular(AlgebraPtr a, std::string name = {});

    const AlgebraPtr &algebra() const { return algebra_; }
    const Field &field() const { return algebra_->field(); }
    std::size_t dim() const { return dim_; }
    const Matrix &action(std::size_t i) const { return action_[i]; }
    const std::vector<Matrix> &actions() const { return action_; }
    const std::string &name() const { return name_; }
    Module renamed(std::string n) const;
    std::uint64_t fingerprint() const { return fingerprint_; }
    /// Same algebra and identical action matrices (not isomorphism).
    bool same_as(const Module &o) const;

    Diagnostic validate() const;
};

struct ModuleMorphism
{
    Module source;
    Module target;
    Matrix matrix;

    Diagnostic validate() const;
};

/// Does the matrix intertwine the actions?
bool is_intertwiner(const Module &src, const Module &tgt, const Matrix &m);

struct HomSpace
{
    Module source;
    Module target;
    std::vector<Matrix> basis;

    std::size_t dim() const { return basis.size(); }
    Matrix combination(const std::vector<elem_t> &coeffs) const;
};

HomSpace hom_space(const Module &m, const Module &n);

struct KernelCokernelImage
{
    Module kernel;
    Matrix kernel_inclusion;
    Module image;
    Matrix image_inclusion;
    /// f = image_inclusion * image_factor
    Matrix image_factor;
    Module cokernel;
    Matrix cokernel_projection;
    /// Section of the projection as vector spaces: projection * section = id.
    Matrix cokernel_section;
};

KernelCokernelImage kci(const Module &src, const Module &tgt, const Matrix &f);

/// The submodule spanned by the columns of basis (which must be invariant), in that basis.
Module submodule(const Module &m, const Matrix &basis);

struct DirectSum
{
    Module sum;
    std::vector<Matrix> injections;
    std::vector<Matrix> projections;
};

/// Throws contract_error when algebras differ; an empty list needs the algebra explicitly.
DirectSum direct_sum(const std::vector<Module> &ms, const AlgebraPtr &algebra);

}
