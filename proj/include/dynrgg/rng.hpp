#pragma once

#include <cstdint>

namespace dynrgg {

/// splitmix64: 64-bit counter-based generator (Steele/Lea/Burton mixing
/// constants). State advance is a single add, so the k-th output is a pure
/// function of (seed, k); independent streams are derived by hashing
/// (master seed, stream index). This is what makes trial-level parallelism
/// bit-reproducible across thread counts.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Raw counter state, for suspending/resuming a stream.
    std::uint64_t state() const { return state_; }

  private:
    std::uint64_t state_;
};

/// Seed for the index-th substream of a master seed. Distinct indices give
/// statistically independent streams.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed + (index + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace dynrgg
