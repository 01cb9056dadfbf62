#pragma once

#include <random>

namespace stablecat {

template <class Visit>
Verdict search_affine(const LinearSystem::Solution &s, const Field &f, std::uint64_t seed, std::uint64_t limit,
                      std::size_t random_trials, Visit &&visit)
{
    const std::size_t k = s.directions.size();
    std::vector<elem_t> c(k, 0);
    if (visit(s.particular)) return Verdict::yes;
    if (k == 0) return Verdict::no;
    const std::uint64_t total = capped_power(f.characteristic(), k, limit);
    if (total <= limit) {
        for (std::uint64_t idx = 1; idx < total; ++idx) {
            std::uint64_t r = idx;
            for (auto &e : c) {
                e = static_cast<elem_t>(r % f.characteristic());
                r /= f.characteristic();
            }
            if (visit(s.at(c))) return Verdict::yes;
        }
        return Verdict::no;
    }
    std::mt19937_64 gen(seed);
    for (std::size_t t = 0; t < random_trials; ++t) {
        for (auto &e : c) e = static_cast<elem_t>(gen() % f.characteristic());
        if (visit(s.at(c))) return Verdict::yes;
    }
    return Verdict::inconclusive;
}

}
