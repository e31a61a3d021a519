#pragma once

#include <cstdint>
#include <vector>

namespace lhcn {

// SplitMix64 (Steele/Lea/Vigna). The generator is pinned here rather than
// taken from <random> so that seeded shuffles, splits and parameter draws
// are bit-identical across platforms and standard-library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, bound) via rejection sampling. bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % bound;
    }

private:
    std::uint64_t state_;
};

// Derives the seed of an independent stream from a base seed and a stream
// tag. Used to split one run seed into shuffle / init / dropout streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
    return g.next();
}

// Fisher-Yates shuffle driven by SplitMix64; iteration order is fixed
// (i from last to first, j = below(i + 1)) so results are reproducible.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace lhcn
