#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "specb/fft.hpp"
#include "specb/field.hpp"
#include "specb/loss.hpp"
#include "specb/rings.hpp"

namespace specb {

/// Per-ring energy of a centered spectrum. For residual profiles the entries
/// sum to the NMSE of the batch; for target profiles they sum to 1.
struct SpectrumProfile {
    std::vector<double> ring_energy;  // indexed by ring id 0..H/2
    int field_size = 0;
    int sample_count = 0;

    double sum() const {
        double acc = 0.0;
        for (double v : ring_energy) acc += v;
        return acc;
    }
};

namespace spectrum_detail {

/// Ring-binned energy of one channel of (pred - target) / scale:
/// full centered spectrum, |E|^2 / (N*N) per pixel with N = H*W.
template <typename T>
void accumulate_channel(const Field<T>& pred, const Field<T>& target, int channel, double scale,
                        const ModeRingIndex& rings, std::vector<double>& acc) {
    const int n = pred.height;
    Field<T> err(1, n, n);
    const T* p = pred.chan(channel);
    const T* t = target.chan(channel);
    const T inv_scale = static_cast<T>(1.0 / scale);
    for (size_t i = 0; i < err.pixels(); ++i) err.data[i] = (p[i] - t[i]) * inv_scale;
    HalfSpectrum<T> spec = forward_rfft2(err);
    auto full = mirror_full_spectrum(spec, 0);
    const double inv_n2 = 1.0 / (static_cast<double>(n) * n * static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double e = std::norm(static_cast<std::complex<double>>(
                                 full[fftshift_source(i, j, n, n)])) *
                             inv_n2;
            acc[rings.at(i, j)] += e;
        }
    }
}

template <typename T>
double channel_rms(const Field<T>& f, int channel) {
    double acc = 0.0;
    const T* p = f.chan(channel);
    for (size_t i = 0; i < f.pixels(); ++i) {
        acc += static_cast<double>(p[i]) * static_cast<double>(p[i]);
    }
    return std::sqrt(acc / static_cast<double>(f.pixels()));
}

}  // namespace spectrum_detail

/// NMSE spectrum of a batch: per sample and channel, normalize the residual by
/// the target's root mean pixel energy, bin the centered spectrum energy into
/// Chebyshev rings, then average profiles over channels and samples. The sum
/// of the profile equals the (per-channel) NMSE of the batch.
template <typename T>
SpectrumProfile nmse_spectrum(const std::vector<Field<T>>& preds,
                              const std::vector<Field<T>>& targets) {
    if (preds.size() != targets.size() || preds.empty()) {
        throw std::invalid_argument("nmse_spectrum: batch size mismatch or empty batch");
    }
    const Field<T>& first = targets[0];
    if (first.height != first.width) {
        throw std::invalid_argument("spectrum diagnostics require square fields");
    }
    const int n = first.height;
    auto rings = ring_index_map(n, n);

    SpectrumProfile prof;
    prof.field_size = n;
    prof.sample_count = static_cast<int>(preds.size());
    prof.ring_energy.assign(rings.max_ring + 1, 0.0);

    for (size_t s = 0; s < preds.size(); ++s) {
        if (!preds[s].same_shape(targets[s]) || preds[s].height != n || preds[s].width != n) {
            throw std::invalid_argument("nmse_spectrum: inconsistent batch shapes");
        }
        std::vector<double> acc(rings.max_ring + 1, 0.0);
        for (int c = 0; c < targets[s].channels; ++c) {
            const double scale = spectrum_detail::channel_rms(targets[s], c);
            if (scale == 0.0) {
                throw std::runtime_error("nmse_spectrum: target channel has zero energy");
            }
            spectrum_detail::accumulate_channel(preds[s], targets[s], c, scale, rings, acc);
        }
        const double inv_c = 1.0 / targets[s].channels;
        for (size_t r = 0; r < acc.size(); ++r) prof.ring_energy[r] += acc[r] * inv_c;
    }
    const double inv_s = 1.0 / static_cast<double>(preds.size());
    for (double& v : prof.ring_energy) v *= inv_s;
    return prof;
}

/// Energy spectrum of the target data itself (the zero-prediction profile);
/// sums to 1.
template <typename T>
SpectrumProfile target_energy_spectrum(const std::vector<Field<T>>& targets) {
    std::vector<Field<T>> zeros;
    zeros.reserve(targets.size());
    for (const auto& t : targets) zeros.emplace_back(t.channels, t.height, t.width, T(0));
    return nmse_spectrum(zeros, targets);
}

enum class EnergyDomain { Spatial, Fourier };

/// One point per pixel count: x = fraction of pixels used (sorted by
/// descending energy), y = cumulative energy fraction, averaged over batch
/// and channels.
template <typename T>
std::vector<std::pair<double, double>> energy_cdf(const std::vector<Field<T>>& fields,
                                                  EnergyDomain domain) {
    if (fields.empty()) throw std::invalid_argument("energy_cdf: empty batch");
    const int n = fields[0].height;
    if (fields[0].width != n) {
        throw std::invalid_argument("spectrum diagnostics require square fields");
    }
    const size_t n_pix = static_cast<size_t>(n) * n;
    std::vector<double> cum(n_pix, 0.0);
    int curves = 0;
    std::vector<double> energy(n_pix);
    for (const auto& f : fields) {
        for (int c = 0; c < f.channels; ++c) {
            if (domain == EnergyDomain::Spatial) {
                const T* p = f.chan(c);
                for (size_t i = 0; i < n_pix; ++i) {
                    energy[i] = static_cast<double>(p[i]) * static_cast<double>(p[i]);
                }
            } else {
                Field<T> one(1, n, n);
                std::copy(f.chan(c), f.chan(c) + n_pix, one.data.begin());
                auto full = mirror_full_spectrum(forward_rfft2(one), 0);
                for (size_t i = 0; i < n_pix; ++i) {
                    energy[i] = std::norm(static_cast<std::complex<double>>(full[i]));
                }
            }
            std::sort(energy.begin(), energy.end(), std::greater<double>());
            double total = 0.0;
            for (double e : energy) total += e;
            if (total == 0.0) throw std::runtime_error("energy_cdf: zero-energy field");
            double run = 0.0;
            for (size_t i = 0; i < n_pix; ++i) {
                run += energy[i];
                cum[i] += run / total;
            }
            ++curves;
        }
    }
    std::vector<std::pair<double, double>> out(n_pix);
    for (size_t i = 0; i < n_pix; ++i) {
        out[i] = {static_cast<double>(i + 1) / static_cast<double>(n_pix),
                  cum[i] / static_cast<double>(curves)};
    }
    return out;
}

/// Smallest pixel fraction whose cumulative energy reaches the given level.
inline double cdf_fraction_at(const std::vector<std::pair<double, double>>& curve, double level) {
    for (const auto& [frac, energy] : curve) {
        if (energy >= level) return frac;
    }
    return 1.0;
}

/// Per-ring improvement ratio before/after; rings where after == 0 report an
/// infinity sentinel.
inline std::vector<double> improvement_profile(const SpectrumProfile& before,
                                               const SpectrumProfile& after) {
    if (before.ring_energy.size() != after.ring_energy.size()) {
        throw std::invalid_argument("improvement_profile: mismatched ring counts");
    }
    std::vector<double> ratio(before.ring_energy.size());
    for (size_t r = 0; r < ratio.size(); ++r) {
        ratio[r] = after.ring_energy[r] == 0.0
                       ? std::numeric_limits<double>::infinity()
                       : before.ring_energy[r] / after.ring_energy[r];
    }
    return ratio;
}

/// Mean of the ratio vector over ring ids in [lo, hi].
inline double mean_ratio_over(const std::vector<double>& ratio, int lo, int hi) {
    double acc = 0.0;
    int count = 0;
    for (int r = lo; r <= hi && r < static_cast<int>(ratio.size()); ++r) {
        acc += ratio[r];
        ++count;
    }
    if (count == 0) throw std::invalid_argument("mean_ratio_over: empty ring range");
    return acc / count;
}

}  // namespace specb
