#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "currikit/rng.hpp"

using namespace currikit;

// Reference outputs of Vigna's splitmix64 from state 0.
TEST_CASE("splitmix64 matches the published reference sequence") {
    std::uint64_t state = 0;
    CHECK(splitmix64_next(state) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64_next(state) == 0x6e789e6aa1b965f4ULL);
    CHECK(splitmix64_next(state) == 0x06c45d188009454fULL);
    CHECK(splitmix64_next(state) == 0xf88bb8a8724c81ecULL);
}

TEST_CASE("mix64 is the stateless splitmix64 step") {
    std::uint64_t state = 42;
    const std::uint64_t expected = mix64(42);
    CHECK(splitmix64_next(state) == expected);
    CHECK(state == 42 + kGoldenGamma);
}

// Frozen from the reference implementation: xoshiro256** state filled with
// four splitmix64 outputs from state 0.
TEST_CASE("xoshiro256** matches the published reference sequence") {
    Xoshiro256StarStar rng(0);
    CHECK(rng.next() == 0x99ec5f36cb75f2b4ULL);
    CHECK(rng.next() == 0xbf6e1f784956452aULL);
    CHECK(rng.next() == 0x1a5f849d4933e6e0ULL);
    CHECK(rng.next() == 0x6aa594f1262d2d2cULL);
}

TEST_CASE("stream seeds separate phase and epoch indices") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t phase = 0; phase < 8; ++phase)
        for (std::uint64_t epoch = 0; epoch < 32; ++epoch)
            seeds.insert(stream_seed(0, phase, epoch));
    CHECK(seeds.size() == 8 * 32);
    // (phase, epoch) is not commutative
    CHECK(stream_seed(7, 1, 2) != stream_seed(7, 2, 1));
    // reserved split stream differs from the first epoch streams
    CHECK(stream_seed(0, 0, 0) != stream_seed(0, 0, 1));
    CHECK(stream_seed(0, 0, 0) != stream_seed(0, 1, 1));
}

TEST_CASE("next_below is in range and deterministic") {
    Xoshiro256StarStar a(123), b(123);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t bound = 1 + static_cast<std::uint64_t>(i % 17);
        const std::uint64_t va = a.next_below(bound);
        CHECK(va < bound);
        CHECK(va == b.next_below(bound));
    }
}

TEST_CASE("fisher_yates_shuffle permutes and reproduces") {
    std::vector<int> items(100);
    std::iota(items.begin(), items.end(), 0);
    const std::vector<int> original = items;

    Xoshiro256StarStar rng(stream_seed(0, 1, 1));
    fisher_yates_shuffle(items, rng);
    CHECK(items != original);  // 1/100! chance of false alarm
    CHECK(std::is_permutation(items.begin(), items.end(), original.begin()));

    std::vector<int> again = original;
    Xoshiro256StarStar rng2(stream_seed(0, 1, 1));
    fisher_yates_shuffle(again, rng2);
    CHECK(again == items);
}

TEST_CASE("shuffles from different streams differ") {
    std::vector<int> a(50), b(50);
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 0);
    Xoshiro256StarStar ra(stream_seed(0, 1, 1)), rb(stream_seed(0, 1, 2));
    fisher_yates_shuffle(a, ra);
    fisher_yates_shuffle(b, rb);
    CHECK(a != b);
}
