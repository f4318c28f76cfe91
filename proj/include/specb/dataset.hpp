#pragma once

#include <stdexcept>
#include <vector>

#include "specb/field.hpp"

namespace specb {

/// Supervised pair (x, y) in original data units.
template <typename T>
struct SamplePair {
    Field<T> x;
    Field<T> y;
};

template <typename T>
using PairDataset = std::vector<SamplePair<T>>;

/// One trajectory: frames[t] is the (C, N, N) state at recording step t.
template <typename T>
struct Sequence {
    std::vector<Field<T>> frames;
};

template <typename T>
using SeqDataset = std::vector<Sequence<T>>;

/// Teacher-forcing pairs: every ground-truth (u_t, u_{t+1}) of every sequence.
template <typename T>
PairDataset<T> make_pairs(const SeqDataset<T>& seqs) {
    PairDataset<T> out;
    for (const auto& s : seqs) {
        if (s.frames.size() < 2) {
            throw std::invalid_argument("make_pairs: sequences need at least 2 steps");
        }
        for (size_t t = 0; t + 1 < s.frames.size(); ++t) {
            out.push_back({s.frames[t], s.frames[t + 1]});
        }
    }
    return out;
}

/// Static pair datasets pass through unchanged.
template <typename T>
PairDataset<T> make_pairs(const PairDataset<T>& pairs) {
    return pairs;
}

}  // namespace specb
