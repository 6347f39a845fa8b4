#pragma once

#include <cstdint>
#include <random>

namespace nnrw {

// Stream tags for deriving independent substreams from one trial seed.
// Weight initialization and data splitting must never share a stream.
inline constexpr std::uint64_t kWeightStreamTag = 0x57454947485453ull; // "WEIGHTS"
inline constexpr std::uint64_t kSplitStreamTag  = 0x53504c495453ull;   // "SPLITS"

std::uint64_t splitmix64(std::uint64_t x);

// Mixes a base seed with a stream tag into a fresh engine seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_tag);

// Seeded random stream. The engine is mt19937_64 (bit-exact by the
// standard); all real-valued transforms are done here rather than through
// std::*_distribution, whose output is implementation-defined. Identical
// seeds therefore give identical streams on any standard library.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Normal(mean, stddev) via Box-Muller; caches the spare deviate.
    double normal(double mean, double stddev);

    // Uniform integer on [0, bound), rejection sampled (unbiased).
    std::uint64_t next_below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace nnrw
