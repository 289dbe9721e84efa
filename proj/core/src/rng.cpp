#include "voronet/rng.hpp"

#include <cmath>

namespace voronet {

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) {
    // Mix the pair through splitmix64 so adjacent streams are uncorrelated.
    std::uint64_t x = seed;
    std::uint64_t a = splitmix64_next(x);
    x ^= 0x6a09e667f3bcc909ULL + stream;
    std::uint64_t b = splitmix64_next(x);
    return Rng(a ^ (b * 0x2545f4914f6cdd1dULL) ^ stream);
}

double Rng::exponential(double rate) {
    // uniform() can return 0; 1 - u is in (0, 1].
    return -std::log1p(-uniform()) / rate;
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    // Exponential race: count arrivals of a unit Poisson process before `mean`.
    // Summing exponentials rather than multiplying uniforms avoids underflow
    // for large means. Exact for all means; O(mean) draws per call, fine for
    // the window sizes used here.
    const double limit = mean;
    double acc = 0.0;
    std::uint64_t n = 0;
    while (true) {
        acc += exponential(1.0);
        if (acc > limit) return n;
        ++n;
    }
}

}  // namespace voronet
