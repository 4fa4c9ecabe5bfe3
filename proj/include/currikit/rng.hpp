#pragma once

// Deterministic PRNG stack used everywhere randomness appears.
//
// Contract (fixed so independent implementations can reproduce manifests
// bit for bit):
//   * mix64            — one output step of Vigna's splitmix64, i.e. the
//                        state increment by the 64-bit golden gamma followed
//                        by the xor-shift-multiply finalizer.
//   * stream_seed      — derives the seed of an independent stream from
//                        (base seed, phase index, epoch index):
//                          stream_seed = mix64(seed ^ (((phase << 32) | epoch) * GOLDEN))
//                        Stream (0, 0) is reserved for holdout splits; epoch
//                        streams are 1-based, so they never collide with it.
//   * Xoshiro256StarStar — xoshiro256** 1.0, state filled by four successive
//                        splitmix64 outputs starting from the stream seed.
//   * next_below       — unbiased bounded draw via rejection of the low
//                        2^64 mod n values, then modulo.
//   * fisher_yates_shuffle — classic descending-index Fisher-Yates.

#include <cstdint>
#include <vector>

namespace currikit {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t state) {
    std::uint64_t z = state + kGoldenGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Advances `state` and returns the next splitmix64 output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t out = mix64(state);
    state += kGoldenGamma;
    return out;
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t phase, std::uint64_t epoch) {
    std::uint64_t combined = (phase << 32) | (epoch & 0xffffffffULL);
    return mix64(seed ^ (combined * kGoldenGamma));
}

class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw in [0, n). n must be nonzero.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

template <typename T>
void fisher_yates_shuffle(std::vector<T>& items, Xoshiro256StarStar& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace currikit
