#ifndef SURJECTIVE_RANDOM_HPP
#define SURJECTIVE_RANDOM_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace surjective {

/// All randomness runs on std::mt19937_64, whose output sequence is fixed by
/// the standard. The distributions below are written out so results do not
/// depend on the standard library's distribution implementations.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform_unit(rng); }

/// Uniform integer in [0, n) by rejection sampling.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % n;
    }
}

/// Fisher-Yates, drawing from the back.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

/// Seed for the index-th independent task: the splitmix64 finalizer applied
/// to master + index * golden_gamma.
inline std::uint64_t task_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + index * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace surjective

#endif
