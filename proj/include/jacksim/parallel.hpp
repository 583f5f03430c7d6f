#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace jacksim {

// Runs fn(0..n-1), fanning out over `threads` workers. Each index must write
// only its own slots; results are then independent of the schedule, and the
// single-threaded run is byte-identical to any multi-threaded one.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    auto worker = [&] {
        for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int use = static_cast<int>(std::min<long>(threads, n));
    pool.reserve(use);
    for (int t = 0; t < use; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace jacksim
