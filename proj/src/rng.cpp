#include "hawkes/rng.hpp"

#include <cmath>
#include <numbers>

namespace hawkes {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t derive_seed(StreamKey key, Substream substream) {
    std::uint64_t h = splitmix64(key.seed);
    h = splitmix64(h ^ key.stream);
    h = splitmix64(h ^ static_cast<std::uint64_t>(substream));
    return h;
}

}  // namespace

RngStream::RngStream(StreamKey key, Substream substream)
    : key_(key), substream_(substream), engine_(derive_seed(key, substream)) {}

double RngStream::uniform() {
    // 53 random mantissa bits, shifted by half an ulp to exclude 0 and 1.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
    return -std::log(uniform()) / rate;
}

double RngStream::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace hawkes
