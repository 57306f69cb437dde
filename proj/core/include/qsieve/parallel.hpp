#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace qsieve {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Splits [lo, hi) into contiguous chunks, runs `work(chunk_lo, chunk_hi)` on
// each, and merges the partial results with `merge` in chunk order.  Merging
// in a fixed order keeps counting operations deterministic regardless of the
// thread count (all our merges are componentwise additions).
template <typename Result, typename Work, typename Merge>
Result parallel_reduce(std::int64_t lo, std::int64_t hi, int threads,
                       Result init, Work work, Merge merge) {
    threads = resolve_threads(threads);
    std::int64_t span = hi - lo;
    if (span <= 0) return init;
    if (threads > span) threads = static_cast<int>(span);
    if (threads <= 1) {
        Result r = work(lo, hi);
        merge(init, r);
        return init;
    }
    std::vector<Result> parts(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        std::int64_t a = lo + span * t / threads;
        std::int64_t b = lo + span * (t + 1) / threads;
        pool.emplace_back([&parts, t, a, b, &work] { parts[t] = work(a, b); });
    }
    for (auto& th : pool) th.join();
    for (auto& p : parts) merge(init, p);
    return init;
}

} // namespace qsieve
