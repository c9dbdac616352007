#pragma once

#include <cstdint>
#include <vector>

namespace treecut {

// Deterministic splittable random stream.  A stream is identified by
// (seed, stream id); the same pair always reproduces the same sequence on
// every platform, and distinct stream ids give statistically independent
// sequences.  Replicated experiments use one stream per replicate so results
// do not depend on thread count or execution order.
//
// Generator: xoshiro256** with per-stream state derived by splitmix64.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();

    // Uniform on {0, 1, ..., n-1}; unbiased (rejection method). n >= 1.
    std::uint64_t below(std::uint64_t n);

    // Uniform on {lo, ..., hi} inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi);

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01();

    // Exponential with the given rate (> 0).
    double exponential(double rate);

    // Fair coin.
    bool coin() { return (next() >> 63) != 0; }

    // Uniform random permutation of 1..n.
    std::vector<int> permutation(int n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Identifier recorded in run manifests.
    static const char* generator_id() { return "xoshiro256ss-splitmix64-v1"; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
};

}  // namespace treecut
