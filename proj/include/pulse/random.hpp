#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pulse {

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for a named stream, e.g. one per coin, so that streams stay
/// independent of which other names are present.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) noexcept;

// mt19937_64 output is fixed by the standard; the bounded draw below is
// ours, so the whole sequence is reproducible across platforms and
// standard libraries (std::uniform_int_distribution is not).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double unit();

private:
    std::mt19937_64 engine_;
};

}  // namespace pulse
