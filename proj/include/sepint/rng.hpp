#pragma once

#include <cstdint>

// Counter-style 64-bit generator (splitmix64). Chosen for cross-platform
// bit-reproducibility: the whole state is one word and every operation is
// exact integer arithmetic. The algorithm id below is recorded in run
// metadata so outputs are reproducible from (id, seed) alone.

namespace sepint {

inline constexpr const char* kRngAlgorithm = "splitmix64";

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1): (k + 0.5) * 2^-53 for k in [0, 2^53).
    double uniform_open01() {
        const std::uint64_t k = next() >> 11;
        return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n) via the widening-multiply map.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

  private:
    std::uint64_t state_;
};

}  // namespace sepint
