#pragma once

#include <string>

#include <json.hpp>

#include "specb/boosting.hpp"

namespace specb {

/// Persist an ensemble as a directory: ensemble.json with the ordered stage
/// list, one subdirectory per stage holding model.json (architecture,
/// normalizer statistics, loss history) and params.bin (raw little-endian
/// scalars; complex spectral weights interleaved real,imag). Reloading
/// reproduces predictions bit-for-bit at the same precision.
template <typename T>
void save_ensemble(const std::string& dir, const BoostEnsemble<T>& ensemble,
                   const nlohmann::json& provenance);

template <typename T>
BoostEnsemble<T> load_ensemble(const std::string& dir);

/// Stage count recorded in an ensemble directory, 0 if absent.
int saved_stage_count(const std::string& dir);

/// Dtype string stored in an ensemble directory ("float32" / "float64").
std::string saved_dtype(const std::string& dir);

nlohmann::json load_ensemble_meta(const std::string& dir);

}  // namespace specb
