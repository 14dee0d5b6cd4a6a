#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace matro {

inline unsigned default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Runs fn(i) for i in [0, count) on `jobs` threads. Work is handed out in
// chunks through an atomic counter, so results written to per-index slots are
// deterministic regardless of scheduling.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& fn, std::size_t chunk = 256) {
    if (count == 0) return;
    if (jobs <= 1 || count <= chunk) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t begin = next.fetch_add(chunk);
            if (begin >= count) return;
            std::size_t end = begin + chunk < count ? begin + chunk : count;
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace matro
