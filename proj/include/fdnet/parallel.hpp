#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fdnet {

inline unsigned resolve_threads(unsigned requested) noexcept {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers, contiguous chunks.
// fn must touch only state owned by index i; callers then reduce the
// per-index slots sequentially, so results are independent of thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (n == 0) return;
    std::size_t use = std::min<std::size_t>(resolve_threads(threads), n);
    if (use <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t chunk = (n + use - 1) / use;
    std::vector<std::thread> pool;
    pool.reserve(use);
    for (std::size_t w = 0; w < use; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fdnet
