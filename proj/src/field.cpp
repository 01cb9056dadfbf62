#include "stablecat/field.hpp"

#include "stablecat/error.hpp"

#include <string>

namespace stablecat {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field::Field(std::uint64_t p)
{
    if (p >= (std::uint64_t(1) << 31) || !is_prime(p))
        throw contract_error("characteristic must be prime (and below 2^31), got " + std::to_string(p));
    p_ = static_cast<elem_t>(p);
}

elem_t Field::pow(elem_t a, std::uint64_t e) const
{
    elem_t result = 1 % p_;
    elem_t base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

elem_t Field::inv(elem_t a) const
{
    if (a == 0) throw contract_error("inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
}

}
