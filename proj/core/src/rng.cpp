#include "rulealg/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rulealg {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGolden * (stream + 1)) ^ mix64(stream + kGolden)) {}

std::uint64_t CounterRng::next_u64() {
    return mix64(key_ + (++counter_) * kGolden);
}

double CounterRng::next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::next_exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("exponential rate must be positive");
    return -std::log(next_uniform()) / rate;
}

std::uint64_t CounterRng::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    return next_u64() % n;
}

std::size_t CounterRng::next_categorical(const std::vector<double>& weights,
                                         double total) {
    double u = next_uniform() * total;
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u <= acc) return i;
    }
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0) return i;
    }
    throw std::invalid_argument("next_categorical: no positive weight");
}

}  // namespace rulealg
