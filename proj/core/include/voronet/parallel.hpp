#pragma once

#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace voronet {

/// Worker count used when a caller passes 0: the VORONET_WORKERS environment
/// variable when set to a positive integer, otherwise hardware concurrency,
/// at least 1. Results never depend on the worker count, only speed does.
unsigned default_workers();

/// Deterministic pairwise summation. The result depends only on the order of
/// `values`, never on how the values were produced, so estimators that fill a
/// per-index buffer from many threads stay bit-reproducible.
double pairwise_sum(std::span<const double> values);

/// Runs fn(i) for every i in [begin, end), split into contiguous chunks across
/// `workers` threads (0 = default_workers()). fn must be safe to call
/// concurrently on distinct indices. Exceptions from workers are rethrown on
/// the calling thread.
template <typename Fn>
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned workers, Fn&& fn) {
    if (end <= begin) return;
    const std::uint64_t n = end - begin;
    unsigned w = workers == 0 ? default_workers() : workers;
    if (static_cast<std::uint64_t>(w) > n) w = static_cast<unsigned>(n);
    if (w <= 1) {
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(w);
    std::vector<std::exception_ptr> errors(w);
    for (unsigned t = 0; t < w; ++t) {
        const std::uint64_t lo = begin + n * t / w;
        const std::uint64_t hi = begin + n * (t + 1) / w;
        threads.emplace_back([&fn, &errors, t, lo, hi] {
            try {
                for (std::uint64_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

}  // namespace voronet
