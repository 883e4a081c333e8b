#pragma once

#include <cstdint>

namespace util {

// Counter-based generator (splitmix64 output function). One u64 of state keeps
// snapshots tiny and makes trajectories reproduce bit-exactly on any platform,
// which std distributions do not guarantee.
struct rng64 {
    std::uint64_t state = 0;

    rng64() = default;
    explicit rng64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // one draw; true with probability p (no draw when p <= 0)
    bool chance(double p) {
        if (p <= 0.0) {
            return false;
        }
        return uniform01() < p;
    }

    friend bool operator==(const rng64&, const rng64&) = default;
};

// Derives an independent stream seed from a base seed and trial coordinates.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    rng64 r(base);
    r.state ^= 0x510e527fade682d1ull * (a + 1);
    r.next();
    r.state ^= 0x9b05688c2b3e6c1full * (b + 1);
    r.next();
    r.state ^= 0x1f83d9abfb41bd6bull * (c + 1);
    return r.next();
}

}  // namespace util
