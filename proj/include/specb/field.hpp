#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace specb {

/// Real-valued multi-channel 2D grid sample, stored row-major as (channel, row, col).
template <typename T>
struct Field {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<T> data;

    Field() = default;

    Field(int channels_, int height_, int width_, T fill = T(0))
        : channels(channels_), height(height_), width(width_),
          data(static_cast<size_t>(channels_) * height_ * width_, fill) {
        if (channels_ < 1 || height_ < 2 || width_ < 2) {
            throw std::invalid_argument("Field: need channels >= 1 and height, width >= 2");
        }
    }

    size_t pixels() const { return static_cast<size_t>(height) * width; }
    size_t size() const { return data.size(); }

    T& at(int c, int i, int j) { return data[(static_cast<size_t>(c) * height + i) * width + j]; }
    const T& at(int c, int i, int j) const {
        return data[(static_cast<size_t>(c) * height + i) * width + j];
    }

    T* chan(int c) { return data.data() + static_cast<size_t>(c) * pixels(); }
    const T* chan(int c) const { return data.data() + static_cast<size_t>(c) * pixels(); }

    bool same_shape(const Field& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }

    void require_shape(int c, int h, int w, const std::string& what) const {
        if (channels != c || height != h || width != w) {
            throw std::invalid_argument(what + ": expected shape (" + std::to_string(c) + "," +
                                        std::to_string(h) + "," + std::to_string(w) + "), got (" +
                                        std::to_string(channels) + "," + std::to_string(height) +
                                        "," + std::to_string(width) + ")");
        }
    }

    bool all_finite() const {
        for (const T& v : data) {
            if (!std::isfinite(static_cast<double>(v))) return false;
        }
        return true;
    }

    void validate_finite(const std::string& what) const {
        if (!all_finite()) throw std::runtime_error(what + ": field contains NaN or Inf");
    }
};

/// Complex half-plane 2D spectrum of a real Field: shape (channels, H, W/2+1).
/// Row index m1 in {0..H-1} with wraparound (m1 >= H/2 means frequency m1 - H),
/// column index m2 in {0..W/2} holds only non-negative frequencies.
template <typename T>
struct HalfSpectrum {
    int channels = 0;
    int height = 0;
    int width = 0;  // width of the underlying real field
    std::vector<std::complex<T>> data;

    HalfSpectrum() = default;

    HalfSpectrum(int channels_, int height_, int width_)
        : channels(channels_), height(height_), width(width_),
          data(static_cast<size_t>(channels_) * height_ * (width_ / 2 + 1)) {}

    int half_width() const { return width / 2 + 1; }
    size_t plane() const { return static_cast<size_t>(height) * half_width(); }

    std::complex<T>& at(int c, int m1, int m2) {
        return data[(static_cast<size_t>(c) * height + m1) * half_width() + m2];
    }
    const std::complex<T>& at(int c, int m1, int m2) const {
        return data[(static_cast<size_t>(c) * height + m1) * half_width() + m2];
    }

    std::complex<T>* chan(int c) { return data.data() + static_cast<size_t>(c) * plane(); }
    const std::complex<T>* chan(int c) const {
        return data.data() + static_cast<size_t>(c) * plane();
    }
};

template <typename T>
Field<T> operator-(const Field<T>& a, const Field<T>& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("Field difference: shape mismatch");
    Field<T> out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

template <typename T>
Field<T> operator+(const Field<T>& a, const Field<T>& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("Field sum: shape mismatch");
    Field<T> out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

/// Channel concatenation [a, b]; spatial shapes must match.
template <typename T>
Field<T> concat_channels(const Field<T>& a, const Field<T>& b) {
    if (a.height != b.height || a.width != b.width) {
        throw std::invalid_argument("concat_channels: spatial shape mismatch");
    }
    Field<T> out(a.channels + b.channels, a.height, a.width);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.data.size());
    return out;
}

}  // namespace specb
