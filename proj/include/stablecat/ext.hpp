#pragma once

#include "stablecat/algebra.hpp"

#include <vector>

namespace stablecat {

/// A short exact sequence 0 -> x -f-> middle -g-> z -> 0 of modules.
struct ShortExact
{
    Module x;
    Module middle;
    Module z;
    Matrix f;
    Matrix g;
};

/// Ext^1(z, x) from the free presentation 0 -> K -iota-> A^n -pi-> z -> 0:
/// classes are Hom(K, x) modulo restrictions of maps A^n -> x.
class Ext1
{
    Module z_, x_;
    Module syzygy_;
    Module free_;
    Matrix iota_;
    Matrix pi_;
    std::vector<Matrix> basis_;

    public:
    Ext1(const Module &z, const Module &x);

    const Module &z() const { return z_; }
    const Module &x() const { return x_; }
    std::size_t dim() const { return basis_.size(); }
    /// Cocycles K -> x representing a basis of the extension classes.
    const std::vector<Matrix> &basis() const { return basis_; }

    /// The extension for sum_i coeffs[i] * basis[i]; the zero class gives the split sequence.
    ShortExact realize(const std::vector<elem_t> &coeffs) const;
};

}
