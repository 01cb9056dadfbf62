#pragma once

#include <cstdint>

namespace stablecat {

using elem_t = std::uint32_t;

/// The prime field F_p, p < 2^31.  Elements are canonical representatives in [0, p).
class Field
{
    elem_t p_;

    public:
    /// Throws contract_error unless p is a prime below 2^31.
    explicit Field(std::uint64_t p);

    elem_t characteristic() const { return p_; }

    elem_t reduce(std::int64_t v) const
    {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<elem_t>(r < 0 ? r + p_ : r);
    }
    elem_t add(elem_t a, elem_t b) const
    {
        std::uint64_t s = std::uint64_t(a) + b;
        return static_cast<elem_t>(s >= p_ ? s - p_ : s);
    }
    elem_t sub(elem_t a, elem_t b) const { return a >= b ? a - b : static_cast<elem_t>(std::uint64_t(a) + p_ - b); }
    elem_t neg(elem_t a) const { return a == 0 ? 0 : p_ - a; }
    elem_t mul(elem_t a, elem_t b) const { return static_cast<elem_t>(std::uint64_t(a) * b % p_); }
    elem_t pow(elem_t a, std::uint64_t e) const;
    /// Multiplicative inverse; a must be nonzero.
    elem_t inv(elem_t a) const;

    bool operator==(const Field &) const = default;
};

bool is_prime(std::uint64_t n);

}
