#pragma once

#include "stablecat/algebra.hpp"
#include "stablecat/category.hpp"

#include <random>

namespace stablecat::fixtures {

inline AlgebraPtr make_a(std::uint64_t p, std::size_t n)
{
    return std::make_shared<const Algebra>(Algebra::truncated_polynomial("A", Field(p), n));
}

/// Jordan block of size k for F_p[x]/(x^n): x acts by a nilpotent shift.
inline Module jordan(const AlgebraPtr &a, std::size_t k)
{
    const Field f = a->field();
    Matrix x(f, k, k);
    for (std::size_t i = 0; i + 1 < k; ++i) x(i + 1, i) = 1;
    std::vector<Matrix> act;
    Matrix pw = Matrix::identity(f, k);
    for (std::size_t i = 0; i < a->dim(); ++i) {
        act.push_back(pw);
        pw = pw * x;
    }
    return Module(a, k, act, "J" + std::to_string(k));
}

/// A seeded random module homomorphism.
inline Morphism random_morphism(const Module &m, const Module &n, std::mt19937_64 &gen)
{
    auto h = cached_hom(m, n);
    std::vector<elem_t> c(h->dim());
    for (auto &e : c) e = static_cast<elem_t>(gen() % m.field().characteristic());
    return {m, n, h->dim() ? h->combination(c) : Matrix(m.field(), n.dim(), m.dim())};
}

}
