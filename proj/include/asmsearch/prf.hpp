#pragma once

#include <cstdint>
#include <string_view>

namespace asmsearch {

// Deterministic 64-bit pseudo-random primitives shared by the emulator, the
// profile assigner and the pool sampler. The definitions below are part of the
// file-format/reproducibility contract: an independent implementation that
// reproduces them bit for bit will agree with this toolkit on every seeded
// output (initial machine states, assigned profiles, sampled pools).
//
//   mix64(z):  z += 0x9e3779b97f4a7c15
//              z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//              z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//              return z ^ (z >> 31)
//
//   prf(seed, x) = mix64(seed ^ x)
//
// mix64 is the splitmix64 state transition applied to a single value.
// All arithmetic is modulo 2^64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t prf(std::uint64_t seed, std::uint64_t input) noexcept {
    return mix64(seed ^ input);
}

// FNV-1a, used to fold string keys (record ids, tokens) into prf inputs.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Seeded splitmix64 stream; the canonical generator behind every sampling
// decision that needs more than one draw.
class SplitMix {
  public:
    explicit constexpr SplitMix(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, n). Plain modulo; the bias is below 2^-50 for every
    // n this toolkit uses and the result is identical on all platforms.
    constexpr std::uint64_t bounded(std::uint64_t n) noexcept {
        return next() % n;
    }

    constexpr double next_double() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

} // namespace asmsearch
