#pragma once

#include "stablecat/matrix.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace stablecat {

/// Univariate polynomial over F_p, coefficients low degree first, no trailing zeros.
class Poly
{
    Field field_;
    std::vector<elem_t> c_;

    void trim();

    public:
    explicit Poly(Field f, std::vector<elem_t> coeffs = {});
    static Poly monomial(Field f, std::size_t degree, elem_t coeff = 1);

    const Field &field() const { return field_; }
    const std::vector<elem_t> &coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    elem_t lead() const { return c_.empty() ? 0 : c_.back(); }
    Poly monic() const;

    Poly operator+(const Poly &o) const;
    Poly operator-(const Poly &o) const;
    Poly operator*(const Poly &o) const;
    bool operator==(const Poly &o) const { return c_ == o.c_; }

    /// (quotient, remainder)
    std::pair<Poly, Poly> divmod(const Poly &d) const;
    Poly operator%(const Poly &d) const { return divmod(d).second; }
    Poly derivative() const;
};

Poly gcd(Poly a, Poly b);
/// base^e mod m
Poly powmod(const Poly &base, std::uint64_t e, const Poly &m);

/// Irreducible monic factors with multiplicity, sorted by (degree, coefficients).
std::vector<std::pair<Poly, unsigned>> factor(const Poly &f, std::uint64_t seed);

/// q(m) for a square matrix m.
Matrix evaluate(const Poly &q, const Matrix &m);

/// Monic minimal polynomial of a square matrix.
Poly minimal_polynomial(const Matrix &m);

}
