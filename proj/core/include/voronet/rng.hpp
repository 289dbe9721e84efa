#pragma once

#include <cstdint>

namespace voronet {

/// xoshiro256++ pseudo-random generator with splitmix64 seeding.
///
/// Streams are derived counter-style: for_stream(seed, i) seeds a fresh
/// generator from the pair (seed, i), so realization i of a simulation draws
/// from its own stream regardless of how work is split across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    /// Generator for sub-stream `stream` of a master `seed`.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

    void reseed(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Exponential with rate > 0 (mean 1/rate).
    double exponential(double rate);

    /// Poisson count with the given mean, exact for any mean >= 0.
    std::uint64_t poisson(double mean);

private:
    std::uint64_t s_[4];
};

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline void Rng::reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix64_next(x);
}

inline std::uint64_t Rng::next_u64() {
    auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

inline double Rng::uniform() {
    // 53 random bits into [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

inline double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

}  // namespace voronet
