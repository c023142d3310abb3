#pragma once

#include <cstdint>

namespace edsf {

// Small deterministic PRNG (splitmix64). The standard <random> engines would
// do, but the distributions (uniform_real_distribution etc.) are not
// guaranteed to produce identical streams across standard library
// implementations, and datasets here must be byte-for-byte reproducible from
// a seed. splitmix64 is tiny, well mixed, and fully specified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform integer in [lo, hi] inclusive
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

private:
    std::uint64_t state_;
};

// Derives an independent child seed from a root seed and a stream tag, so one
// experiment seed can fan out to generators / components / trials without the
// streams overlapping.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) {
    std::uint64_t z = root ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace edsf
