#include "stablecat/ext.hpp"

#include "stablecat/error.hpp"

namespace stablecat {

Ext1::Ext1(const Module &z, const Module &x)
    : z_(z), x_(x), syzygy_(Module::zero(z.algebra())), free_(Module::zero(z.algebra())),
      iota_(z.field(), 0, 0), pi_(z.field(), 0, 0)
{
    if (z.algebra() != x.algebra()) throw contract_error("ext1: modules over different algebras");
    const auto &alg = z.algebra();
    const Field &f = z.field();
    const std::size_t n = alg->dim();
    std::vector<Module> copies(z.dim(), Module::regular(alg));
    auto ds = direct_sum(copies, alg);
    free_ = ds.sum;
    // Copy j sends b_i to b_i . z_j.
    pi_ = Matrix(f, z.dim(), free_.dim());
    for (std::size_t j = 0; j < z.dim(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t r = 0; r < z.dim(); ++r) pi_(r, j * n + i) = z.action(i)(r, j);
    auto k = kci(free_, z, pi_);
    syzygy_ = k.kernel;
    iota_ = k.kernel_inclusion;

    HomSpace hk = hom_space(syzygy_, x);
    HomSpace hp = hom_space(free_, x);
    std::vector<Matrix> coboundaries;
    for (auto &phi : hp.basis) coboundaries.push_back(phi * iota_);
    auto span = linear_basis(coboundaries);
    std::vector<Matrix> all = span;
    all.insert(all.end(), hk.basis.begin(), hk.basis.end());
    auto full = linear_basis(all);
    basis_.assign(full.begin() + static_cast<std::ptrdiff_t>(span.size()), full.end());
}

ShortExact Ext1::realize(const std::vector<elem_t> &coeffs) const
{
    const Field &f = z_.field();
    const auto &alg = z_.algebra();
    Matrix c(f, x_.dim(), syzygy_.dim());
    for (std::size_t i = 0; i < basis_.size() && i < coeffs.size(); ++i) c += basis_[i].scaled(coeffs[i]);
    // Pushout: middle = coker((c ; -iota) : K -> x + A^n).
    auto ds = direct_sum({x_, free_}, alg);
    Matrix emb = ds.injections[0] * c - ds.injections[1] * iota_;
    auto k = kci(syzygy_, ds.sum, emb);
    Matrix fmap = k.cokernel_projection * ds.injections[0];
    Matrix through = pi_ * ds.projections[1];
    // g with g * proj = (0, pi).
    auto sol = solve_affine(k.cokernel_projection.transpose(), through.transpose());
    if (!sol) throw consistency_error("ext1 realize: induced map to z does not exist");
    return ShortExact{x_, k.cokernel, z_, fmap, sol->particular.transpose()};
}

}
