#pragma once

#include <cstdint>
#include <string_view>

namespace qri {

// Seeded counter-based generator (splitmix64). 64-bit Weyl counter state with a
// strong output mix; identical (seed, algorithm) reproduces the exact stream on
// any platform, which is all the simulation harness needs.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    static constexpr std::string_view algorithm() noexcept { return "splitmix64"; }

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw strictly inside (0, 1): 53-bit mantissa offset by half an ulp,
    // so quantile functions never see 0 or 1.
    double next_double() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace qri
