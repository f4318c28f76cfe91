#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specb/field.hpp"

namespace specb {

/// Per-channel standardization fitted on training data only. Stored alongside
/// any checkpoint that used it.
template <typename T>
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> std_dev;

    bool fitted() const { return !mean.empty(); }
    int channels() const { return static_cast<int>(mean.size()); }

    static Normalizer fit(const std::vector<Field<T>>& fields) {
        if (fields.empty()) throw std::invalid_argument("normalizer: no fields to fit");
        const int C = fields[0].channels;
        Normalizer n;
        n.mean.assign(C, 0.0);
        n.std_dev.assign(C, 0.0);
        std::vector<double> count(C, 0.0);
        for (const auto& f : fields) {
            if (f.channels != C) throw std::invalid_argument("normalizer: channel mismatch");
            for (int c = 0; c < C; ++c) {
                const T* p = f.chan(c);
                for (size_t i = 0; i < f.pixels(); ++i) n.mean[c] += static_cast<double>(p[i]);
                count[c] += static_cast<double>(f.pixels());
            }
        }
        for (int c = 0; c < C; ++c) n.mean[c] /= count[c];
        for (const auto& f : fields) {
            for (int c = 0; c < C; ++c) {
                const T* p = f.chan(c);
                for (size_t i = 0; i < f.pixels(); ++i) {
                    double d = static_cast<double>(p[i]) - n.mean[c];
                    n.std_dev[c] += d * d;
                }
            }
        }
        for (int c = 0; c < C; ++c) {
            n.std_dev[c] = std::sqrt(n.std_dev[c] / count[c]);
            if (!(n.std_dev[c] > 0.0)) {
                throw std::runtime_error("normalizer: channel " + std::to_string(c) +
                                         " has zero standard deviation");
            }
        }
        return n;
    }

    Field<T> normalize(const Field<T>& f) const {
        check(f);
        Field<T> out = f;
        for (int c = 0; c < f.channels; ++c) {
            T* p = out.chan(c);
            const T mu = static_cast<T>(mean[c]);
            const T inv = static_cast<T>(1.0 / std_dev[c]);
            for (size_t i = 0; i < out.pixels(); ++i) p[i] = (p[i] - mu) * inv;
        }
        return out;
    }

    Field<T> denormalize(const Field<T>& f) const {
        check(f);
        Field<T> out = f;
        for (int c = 0; c < f.channels; ++c) {
            T* p = out.chan(c);
            const T mu = static_cast<T>(mean[c]);
            const T sd = static_cast<T>(std_dev[c]);
            for (size_t i = 0; i < out.pixels(); ++i) p[i] = p[i] * sd + mu;
        }
        return out;
    }

    /// Chain rule through denormalize: d(normalized out) = d(raw out) * std.
    Field<T> denormalize_grad(const Field<T>& g) const {
        check(g);
        Field<T> out = g;
        for (int c = 0; c < g.channels; ++c) {
            T* p = out.chan(c);
            const T sd = static_cast<T>(std_dev[c]);
            for (size_t i = 0; i < out.pixels(); ++i) p[i] *= sd;
        }
        return out;
    }

  private:
    void check(const Field<T>& f) const {
        if (!fitted()) throw std::runtime_error("normalizer: not fitted");
        if (f.channels != channels()) {
            throw std::invalid_argument("normalizer: channel count mismatch");
        }
    }
};

}  // namespace specb
