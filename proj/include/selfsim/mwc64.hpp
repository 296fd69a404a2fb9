#pragma once

#include <cstdint>

namespace selfsim {

// 64-bit multiply-with-carry generator, fixed here for cross-implementation
// reproducibility of the Monte-Carlo path:
//
//   t = 0xffebb71d94fcdaf9 * x + c   (128-bit product)
//   x <- low 64 bits of t, c <- high 64 bits of t, output x
//
// Seeding: x = seed, c = 1, then 8 warm-up outputs are discarded.
// Uniform draws in [0, m) use next() % m.
class Mwc64 {
public:
    explicit Mwc64(uint64_t seed) : x_(seed), c_(1) {
        for (int i = 0; i < 8; ++i) next();
    }

    uint64_t next() {
        unsigned __int128 t = static_cast<unsigned __int128>(kMultiplier) * x_ + c_;
        x_ = static_cast<uint64_t>(t);
        c_ = static_cast<uint64_t>(t >> 64);
        return x_;
    }

    uint32_t next_below(uint32_t m) { return static_cast<uint32_t>(next() % m); }

    static constexpr uint64_t kMultiplier = 0xffebb71d94fcdaf9ULL;

private:
    uint64_t x_;
    uint64_t c_;
};

// splitmix64; used to derive independent per-record seeds from a sweep seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace selfsim
