#pragma once

#include <functional>
#include <thread>
#include <vector>

#include "treecut/rng.hpp"

namespace treecut {

// Runs `fn(replicate_index, rng)` for indices 0..count-1 across `threads`
// workers.  Each replicate gets its own stream (seed, stream_base + index)
// and results land in replicate order, so the output is identical for every
// thread count.
template <typename T>
std::vector<T> run_replicates(std::uint64_t seed, std::uint64_t stream_base, long long count,
                              int threads, const std::function<T(long long, RngStream&)>& fn) {
    std::vector<T> results(static_cast<std::size_t>(count));
    if (threads < 1) threads = 1;
    if (threads == 1) {
        for (long long i = 0; i < count; ++i) {
            RngStream rng(seed, stream_base + static_cast<std::uint64_t>(i));
            results[static_cast<std::size_t>(i)] = fn(i, rng);
        }
        return results;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        workers.emplace_back([&, w]() {
            for (long long i = w; i < count; i += threads) {
                RngStream rng(seed, stream_base + static_cast<std::uint64_t>(i));
                results[static_cast<std::size_t>(i)] = fn(i, rng);
            }
        });
    }
    for (auto& worker : workers) worker.join();
    return results;
}

}  // namespace treecut
