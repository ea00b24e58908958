#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace dioph {

/// Worker cap: DIOPH_THREADS when set (clamped to [1, hardware]), else all
/// hardware threads.
inline uint32_t worker_count() {
    uint32_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const char* env = std::getenv("DIOPH_THREADS");
    if (!env || !*env) return hw;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return 1;
    return v < long(hw) ? uint32_t(v) : hw;
}

/// Runs fn(chunk_index, begin, end) over a contiguous split of [0, total).
/// Chunks are fixed by `workers`, not by scheduling, so results assembled in
/// chunk order are deterministic.
inline void parallel_chunks(uint64_t total,
                            const std::function<void(uint32_t, uint64_t, uint64_t)>& fn) {
    uint32_t workers = worker_count();
    if (total < 1024 || workers <= 1) {
        fn(0, 0, total);
        return;
    }
    if (uint64_t(workers) > total) workers = static_cast<uint32_t>(total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    uint64_t chunk = (total + workers - 1) / workers;
    for (uint32_t i = 0; i < workers; ++i) {
        uint64_t begin = uint64_t(i) * chunk;
        uint64_t end = begin + chunk < total ? begin + chunk : total;
        if (begin >= end) break;
        pool.emplace_back([&fn, i, begin, end] { fn(i, begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace dioph
