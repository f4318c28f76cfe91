#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace specb {

/// Chebyshev ring ids over a centered (fftshifted) square spectrum.
/// Ring m is the set of pixels at L-inf distance m from the zero-frequency
/// pixel; interior ring m holds 8m pixels, outermost rings on even grids are
/// partial.
struct ModeRingIndex {
    int size = 0;                 // H = W
    int max_ring = 0;
    std::vector<int> ring_of;     // per shifted pixel, row-major H*W
    std::vector<int> ring_count;  // pixels per ring, length max_ring + 1

    int at(int i, int j) const { return ring_of[static_cast<size_t>(i) * size + j]; }
};

inline ModeRingIndex ring_index_map(int H, int W) {
    if (H != W) {
        throw std::invalid_argument("spectrum diagnostics require square fields");
    }
    ModeRingIndex idx;
    idx.size = H;
    const int center = H / 2;  // zero frequency after centering
    idx.max_ring = 0;
    idx.ring_of.resize(static_cast<size_t>(H) * W);
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            int r = std::max(std::abs(i - center), std::abs(j - center));
            idx.ring_of[static_cast<size_t>(i) * W + j] = r;
            idx.max_ring = std::max(idx.max_ring, r);
        }
    }
    idx.ring_count.assign(idx.max_ring + 1, 0);
    for (int r : idx.ring_of) ++idx.ring_count[r];
    return idx;
}

/// Centered (fftshift) index: shifted (i, j) reads full-spectrum entry
/// ((i - H/2) mod H, (j - W/2) mod W).
inline size_t fftshift_source(int i, int j, int H, int W) {
    int si = (i - H / 2 + H) % H;
    int sj = (j - W / 2 + W) % W;
    return static_cast<size_t>(si) * W + sj;
}

}  // namespace specb
