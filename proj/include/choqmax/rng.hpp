#pragma once

#include <cstdint>

namespace choqmax {

// splitmix64; self-contained so streams are identical on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    bool coin() { return (next() & 1u) != 0; }

  private:
    std::uint64_t state_;
};

// Decorrelated per-trial seed so trial results do not depend on schedule.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    return mix.next();
}

}  // namespace choqmax
