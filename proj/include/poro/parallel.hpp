#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace poro {

// Runs fn(i) for i in [0, count). Results must be written to per-index slots
// by the caller; combined with per-index RNG substreams this keeps outputs
// independent of the thread count.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    std::size_t nthreads = static_cast<std::size_t>(threads);
    if (hw > 0 && nthreads > hw * 4) nthreads = hw * 4;
    if (nthreads > count) nthreads = count;

    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace poro
