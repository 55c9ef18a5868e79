#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pumpout {

/// Derive the seed of a named substream from a base seed (splitmix64 over
/// the base xored with a hash of the tag). Shuffling, corruption, weight
/// init etc. each get their own stream so they never steal draws from one
/// another.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream_tag);

/// Deterministic RNG. mt19937_64 output is pinned by the standard; the
/// helpers below replace std::uniform_*_distribution / std::shuffle, whose
/// results are implementation-defined and would break bit-for-bit
/// reproducibility across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t base, std::string_view stream_tag)
        : engine_(derive_seed(base, stream_tag)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n); n > 0. Modulo reduction (bias is
    /// negligible for n far below 2^64 and determinism is what matters).
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller; second draw is cached.
    double gaussian();

    /// Fisher-Yates shuffle; consumes exactly v.size()-1 draws.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace pumpout
