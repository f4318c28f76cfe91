#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "specb/dataset.hpp"
#include "specb/field.hpp"

namespace specb {

/// On-disk dataset container: a directory with manifest.json plus one raw
/// binary file per named array (little-endian float32, row-major, no header).
struct DatasetContainer {
    nlohmann::json manifest;
    std::map<std::string, std::pair<std::vector<long>, std::vector<float>>> arrays;

    const std::pair<std::vector<long>, std::vector<float>>& array(const std::string& name) const;
};

void write_container(const std::string& dir, const nlohmann::json& meta,
                     const std::map<std::string, std::pair<std::vector<long>, std::vector<float>>>&
                         arrays);

DatasetContainer read_container(const std::string& dir);

/// Static pair dataset (Darcy) from arrays <split>_a / <split>_u of shape
/// (n, 1, N, N).
template <typename T>
PairDataset<T> pairs_from_container(const DatasetContainer& c, const std::string& split) {
    const auto& [ashape, adata] = c.array(split + "_a");
    const auto& [ushape, udata] = c.array(split + "_u");
    if (ashape.size() != 4 || ushape != ashape) {
        throw std::runtime_error("dataset container: bad darcy array shapes");
    }
    const long n = ashape[0], C = ashape[1], H = ashape[2], W = ashape[3];
    PairDataset<T> out(n);
    const size_t per = static_cast<size_t>(C) * H * W;
    for (long s = 0; s < n; ++s) {
        Field<T> x(static_cast<int>(C), static_cast<int>(H), static_cast<int>(W));
        Field<T> y = x;
        for (size_t t = 0; t < per; ++t) {
            x.data[t] = static_cast<T>(adata[s * per + t]);
            y.data[t] = static_cast<T>(udata[s * per + t]);
        }
        out[s] = {std::move(x), std::move(y)};
    }
    return out;
}

/// Sequential dataset from array <split>_w (or _uv) of shape (n, T, C, N, N).
template <typename T>
SeqDataset<T> seqs_from_container(const DatasetContainer& c, const std::string& split,
                                  const std::string& array_suffix) {
    const auto& [shape, data] = c.array(split + "_" + array_suffix);
    if (shape.size() != 5) throw std::runtime_error("dataset container: bad sequence shape");
    const long n = shape[0], T_steps = shape[1], C = shape[2], H = shape[3], W = shape[4];
    SeqDataset<T> out(n);
    const size_t per_frame = static_cast<size_t>(C) * H * W;
    for (long s = 0; s < n; ++s) {
        out[s].frames.reserve(T_steps);
        for (long t = 0; t < T_steps; ++t) {
            Field<T> f(static_cast<int>(C), static_cast<int>(H), static_cast<int>(W));
            const size_t base = (static_cast<size_t>(s) * T_steps + t) * per_frame;
            for (size_t i = 0; i < per_frame; ++i) f.data[i] = static_cast<T>(data[base + i]);
            out[s].frames.push_back(std::move(f));
        }
    }
    return out;
}

}  // namespace specb
