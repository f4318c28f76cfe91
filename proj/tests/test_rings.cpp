#include <doctest.h>

#include <map>

#include "specb/rings.hpp"

using namespace specb;

TEST_CASE("ring counts on a 4x4 grid (partial outer ring)") {
    auto idx = ring_index_map(4, 4);
    CHECK(idx.max_ring == 2);
    CHECK(idx.ring_count[0] == 1);
    CHECK(idx.ring_count[1] == 8);
    CHECK(idx.ring_count[2] == 7);
}

TEST_CASE("interior ring m holds 8m pixels on a 64x64 grid") {
    auto idx = ring_index_map(64, 64);
    CHECK(idx.ring_count[1] == 8);
    CHECK(idx.ring_count[2] == 16);
    for (int m = 1; m < 32; ++m) CHECK(idx.ring_count[m] == 8 * m);
    CHECK(idx.max_ring == 32);
}

TEST_CASE("odd grid: center at (1,1), fully covered by ring 1") {
    auto idx = ring_index_map(3, 3);
    CHECK(idx.at(1, 1) == 0);
    CHECK(idx.max_ring == 1);
    CHECK(idx.ring_count[0] == 1);
    CHECK(idx.ring_count[1] == 8);
}

TEST_CASE("rings partition the grid") {
    for (int n : {4, 5, 16, 33, 64}) {
        auto idx = ring_index_map(n, n);
        int total = 0;
        for (int c : idx.ring_count) total += c;
        CHECK(total == n * n);
        for (int r : idx.ring_of) {
            CHECK(r >= 0);
            CHECK(r <= idx.max_ring);
        }
    }
}

TEST_CASE("non-square input rejected") {
    CHECK_THROWS_WITH_AS(ring_index_map(4, 8), "spectrum diagnostics require square fields",
                         std::invalid_argument);
}

TEST_CASE("fftshift puts zero frequency at (H/2, W/2)") {
    // shifted center must read full-spectrum entry (0, 0)
    CHECK(fftshift_source(2, 2, 4, 4) == 0);
    CHECK(fftshift_source(1, 1, 3, 3) == 0);
    CHECK(fftshift_source(32, 32, 64, 64) == 0);
}
