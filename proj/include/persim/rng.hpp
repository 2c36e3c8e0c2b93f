#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace persim {

// Deterministic, cross-platform random source.
//
// The raw stream is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. All mappings from raw 64-bit words to doubles, bounded
// integers, and categorical draws are implemented here rather than with
// std::*_distribution, which the standard leaves implementation-defined.
// Identical seeds therefore replay identical samples on any conforming
// toolchain.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], both inclusive. Uses rejection sampling
    // over the smallest covering power-of-two-free range, so results do not
    // depend on platform integer-division quirks.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Draws an index with probability weights[i] / sum(weights).
    // Weights must be nonnegative with positive total.
    std::size_t categorical(std::span<const double> weights);

    // Draws an index from precomputed inclusive cumulative weights
    // (cumulative.back() = total mass).
    std::size_t categorical_from_cumulative(std::span<const double> cumulative);

  private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; the documented rule for deriving independent
// per-stream seeds (e.g. one sampling stream per state) from a base seed.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream_index);

} // namespace persim
