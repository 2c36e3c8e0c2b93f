#include "persim/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace persim {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw std::invalid_argument("Rng::uniform_int: lo > hi");
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) {
        // Full 64-bit range.
        return static_cast<std::int64_t>(next_u64());
    }
    // Classic rejection: discard the tail that would bias the modulus.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span + 1) % span;
    std::uint64_t draw = next_u64();
    while (draw > limit) {
        draw = next_u64();
    }
    return lo + static_cast<std::int64_t>(draw % span);
}

std::size_t Rng::categorical(std::span<const double> weights) {
    std::vector<double> cumulative(weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) {
            throw std::invalid_argument("Rng::categorical: negative weight");
        }
        total += weights[i];
        cumulative[i] = total;
    }
    return categorical_from_cumulative(cumulative);
}

std::size_t Rng::categorical_from_cumulative(std::span<const double> cumulative) {
    if (cumulative.empty() || cumulative.back() <= 0.0) {
        throw std::invalid_argument("Rng::categorical: no positive mass");
    }
    const double target = uniform_double() * cumulative.back();
    // First bucket whose cumulative mass exceeds the target; upper_bound can
    // only land on a positive-mass bucket except when rounding pushes the
    // target onto the total itself.
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    std::size_t idx =
        it == cumulative.end() ? cumulative.size() - 1 : static_cast<std::size_t>(it - cumulative.begin());
    while (idx > 0 && cumulative[idx] == cumulative[idx - 1]) {
        --idx;
    }
    return idx;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream_index) {
    std::uint64_t z = base_seed + (stream_index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace persim
