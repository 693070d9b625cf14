#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hawkes {

// Independent purposes drawing from one (seed, stream) pair. Each purpose gets
// its own generator so that changing how many claims are drawn never shifts
// the event times of the same replicate.
enum class Substream : std::uint32_t {
    arrivals = 0,
    marks = 1,
    claims = 2,
};

// Identifies one replicate: master seed plus replicate (stream) index.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seedable random source. Identical (seed, stream, substream) triples
/// reproduce identical draws bit for bit on every platform: the engine is
/// std::mt19937_64, whose output sequence is fixed by the standard, and all
/// variates are produced by explicit transforms here rather than by the
/// implementation-defined <random> distributions.
class RngStream {
public:
    static constexpr std::string_view algorithm = "mt19937_64+splitmix64";

    RngStream(StreamKey key, Substream substream);
    RngStream(std::uint64_t seed, std::uint64_t stream, Substream substream)
        : RngStream(StreamKey{seed, stream}, substream) {}

    const StreamKey& key() const noexcept { return key_; }
    Substream substream() const noexcept { return substream_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1).
    double uniform();

    // Exponential with the given rate (> 0).
    double exponential(double rate);

    // Standard normal via Box-Muller; no cached second variate.
    double normal();

private:
    StreamKey key_;
    Substream substream_;
    std::mt19937_64 engine_;
};

}  // namespace hawkes
