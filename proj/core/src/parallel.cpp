#include "voronet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace voronet {

unsigned default_workers() {
    if (const char* env = std::getenv("VORONET_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
            // fall through to hardware concurrency on a malformed value
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

double pairwise_sum(std::span<const double> values) {
    // Recurse down to short runs; the fixed split points make the result
    // independent of the caller's threading.
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace voronet
