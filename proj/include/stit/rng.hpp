#pragma once

#include <cmath>
#include <cstdint>

namespace stit {

// 64-bit mixing (splitmix64 finalizer). Used both to expand seeds and to
// derive child stream ids from (parent id, salt).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL));
}

// xoshiro256** with hand-rolled variate generation, so that streams are
// bit-identical across platforms and standard-library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& w : s_) w = z = mix64(z);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // strictly positive exponential variate with given rate
    double exponential(double rate) {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return -std::log(u) / rate;
    }

    // unbiased index in [0, n)
    std::uint64_t index(std::uint64_t n) {
        // rejection on the top multiple of n
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do { x = next_u64(); } while (x >= limit);
        return x % n;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Deterministic stream id. A simulation derives per-cell streams from the
// master seed and the cell's split path, so results do not depend on
// traversal order or thread scheduling.
struct StreamId {
    std::uint64_t v = 0;
    StreamId child(std::uint64_t salt) const { return {mix64(v, salt)}; }
    Rng rng() const { return Rng(v); }
};

} // namespace stit
