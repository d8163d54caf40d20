#pragma once

#include <cstdint>
#include <string_view>

#include "meanfield/circle.hpp"

namespace meanfield {

// 64-bit finalizer (splitmix64 style). Full avalanche, cheap, portable.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Counter-based stream generator keyed by (master seed, purpose tag, index).
// Every derived seed in the project flows through this so that replays are
// portable and independent of scheduling. The state walk is splitmix64; the
// key parts are absorbed through the finalizer one by one.
class StreamRng {
  public:
    StreamRng(std::uint64_t master_seed, std::string_view purpose, std::uint64_t index) {
        static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
        std::uint64_t s = mix64(master_seed + kGamma);
        s = mix64(s ^ (fnv1a64(purpose) + kGamma));
        s = mix64(s ^ (index + kGamma));
        state_ = s;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform double in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    Config next_config(std::size_t n_sites) {
        Config c(n_sites);
        for (auto& x : c) x = next_unit();
        return c;
    }

  private:
    std::uint64_t state_;
};

}  // namespace meanfield
