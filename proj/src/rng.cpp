#include "nnrw/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nnrw {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_tag) {
    return splitmix64(splitmix64(base) ^ stream_tag);
}

double RandomStream::next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
}

double RandomStream::normal(double mean, double stddev) {
    if (have_spare_) {
        have_spare_ = false;
        return mean + stddev * spare_;
    }
    const double u1 = 1.0 - next_unit(); // (0, 1], keeps log() finite
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return mean + stddev * r * std::cos(a);
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("next_below: bound must be positive");
    constexpr std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    // Largest multiple of bound that fits in 2^64, as an inclusive limit.
    const std::uint64_t rem = (max % bound + 1) % bound;
    const std::uint64_t limit = max - rem;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x > limit);
    return x % bound;
}

} // namespace nnrw
