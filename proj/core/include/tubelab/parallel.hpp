#pragma once
/**
 * @file parallel.hpp
 * @brief Static-chunk parallel loop. Results must be written to per-index
 * slots (or merged in index order afterwards) so output never depends on the
 * thread schedule.
 */

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace tubelab {

inline int default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs fn(begin, end) over a static partition of [0, n) into `workers` chunks.
inline void parallel_chunks(std::int64_t n, int workers,
                            const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    if (workers < 1) workers = 1;
    const std::int64_t chunks = std::min<std::int64_t>(workers, n);
    if (chunks == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(chunks));
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::int64_t begin = n * c / chunks;
        const std::int64_t end = n * (c + 1) / chunks;
        threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace tubelab
