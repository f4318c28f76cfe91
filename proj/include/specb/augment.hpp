#pragma once

#include <stdexcept>
#include <vector>

#include "specb/dataset.hpp"
#include "specb/field.hpp"

namespace specb {

/// The eight square-grid isometries generated by horizontal/vertical flips and
/// the 90/180/270 degree rotations.
enum class GridTransform {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipH,
    FlipV,
    Transpose,
    AntiTranspose
};

inline constexpr GridTransform kAllTransforms[8] = {
    GridTransform::Identity,  GridTransform::Rot90, GridTransform::Rot180,
    GridTransform::Rot270,    GridTransform::FlipH, GridTransform::FlipV,
    GridTransform::Transpose, GridTransform::AntiTranspose};

template <typename T>
Field<T> apply_transform(const Field<T>& f, GridTransform t) {
    if (f.height != f.width) {
        throw std::invalid_argument("augment: square fields required");
    }
    const int n = f.height;
    Field<T> out(f.channels, n, n);
    for (int c = 0; c < f.channels; ++c) {
        const T* src = f.chan(c);
        T* dst = out.chan(c);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                int si = i, sj = j;
                switch (t) {
                    case GridTransform::Identity: break;
                    case GridTransform::Rot90:
                        si = j;
                        sj = n - 1 - i;
                        break;
                    case GridTransform::Rot180:
                        si = n - 1 - i;
                        sj = n - 1 - j;
                        break;
                    case GridTransform::Rot270:
                        si = n - 1 - j;
                        sj = i;
                        break;
                    case GridTransform::FlipH:
                        sj = n - 1 - j;
                        break;
                    case GridTransform::FlipV:
                        si = n - 1 - i;
                        break;
                    case GridTransform::Transpose:
                        si = j;
                        sj = i;
                        break;
                    case GridTransform::AntiTranspose:
                        si = n - 1 - j;
                        sj = n - 1 - i;
                        break;
                }
                dst[static_cast<size_t>(i) * n + j] = src[static_cast<size_t>(si) * n + sj];
            }
        }
    }
    return out;
}

/// Extend a pair dataset with all eight isometries applied consistently to
/// inputs and targets.
template <typename T>
PairDataset<T> augment(const PairDataset<T>& in) {
    PairDataset<T> out;
    out.reserve(in.size() * 8);
    for (const auto& s : in) {
        for (GridTransform t : kAllTransforms) {
            out.push_back({apply_transform(s.x, t), apply_transform(s.y, t)});
        }
    }
    return out;
}

/// Extend a sequential dataset; each transform is applied to every time step
/// of a sequence.
template <typename T>
SeqDataset<T> augment(const SeqDataset<T>& in) {
    SeqDataset<T> out;
    out.reserve(in.size() * 8);
    for (const auto& seq : in) {
        for (GridTransform t : kAllTransforms) {
            Sequence<T> s;
            s.frames.reserve(seq.frames.size());
            for (const auto& f : seq.frames) s.frames.push_back(apply_transform(f, t));
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace specb
