#pragma once

#include <cstdint>
#include <vector>

namespace rulealg {

/// Deterministic counter-based generator: the i-th output is a fixed 64-bit
/// mix of (key, i), where the key is derived from a 64-bit seed and a stream
/// index. Streams are independent substreams used one per trajectory; the
/// algorithm identity is part of the reproducibility contract and recorded
/// in output metadata.
class CounterRng {
public:
    static constexpr const char* kAlgorithm = "splitmix64-counter";

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform in (0, 1]; never returns 0, so log() is safe.
    double next_uniform();
    double next_exponential(double rate);
    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n);
    /// Index with probability weights[i] / total.
    std::size_t next_categorical(const std::vector<double>& weights, double total);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rulealg
