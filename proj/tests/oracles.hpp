#pragma once

// Test-only reference implementations, kept independent of the library's
// transform and model code paths: direct O(N^2) DFT summation, finite
// differences, and small classical integrators.

#include <complex>
#include <vector>

#include "specb/field.hpp"

namespace specb::test {

/// Direct-summation full 2D DFT of one real channel, unnormalized, sign -1.
template <typename T>
std::vector<std::complex<double>> naive_dft2(const T* x, int H, int W) {
    const double two_pi = 6.283185307179586476925286766559;
    std::vector<std::complex<double>> out(static_cast<size_t>(H) * W);
    for (int m1 = 0; m1 < H; ++m1) {
        for (int m2 = 0; m2 < W; ++m2) {
            std::complex<double> acc(0.0, 0.0);
            for (int i = 0; i < H; ++i) {
                for (int j = 0; j < W; ++j) {
                    double ang = -two_pi * (static_cast<double>(m1) * i / H +
                                            static_cast<double>(m2) * j / W);
                    acc += static_cast<double>(x[static_cast<size_t>(i) * W + j]) *
                           std::complex<double>(std::cos(ang), std::sin(ang));
                }
            }
            out[static_cast<size_t>(m1) * W + m2] = acc;
        }
    }
    return out;
}

/// Direct-summation inverse of a full complex spectrum, 1/N-normalized, real part.
inline std::vector<double> naive_idft2_real(const std::vector<std::complex<double>>& s, int H,
                                            int W) {
    const double two_pi = 6.283185307179586476925286766559;
    std::vector<double> out(static_cast<size_t>(H) * W);
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (int m1 = 0; m1 < H; ++m1) {
                for (int m2 = 0; m2 < W; ++m2) {
                    double ang = two_pi * (static_cast<double>(m1) * i / H +
                                           static_cast<double>(m2) * j / W);
                    acc += s[static_cast<size_t>(m1) * W + m2] *
                           std::complex<double>(std::cos(ang), std::sin(ang));
                }
            }
            out[static_cast<size_t>(i) * W + j] = acc.real() / (static_cast<double>(H) * W);
        }
    }
    return out;
}

/// Brute-force spectral convolution: full O(N^2) DFT, per-mode product on the
/// retained block with explicit conjugate extension, direct inverse.
/// w is split-complex (2k*k, c_out, c_in) as in the library layout.
template <typename T>
specb::Field<double> naive_spectral_conv(const specb::Field<T>& x, const std::vector<double>& w,
                                         int c_out, int k) {
    const int H = x.height, W = x.width, wh = W / 2 + 1;
    const int c_in = x.channels;
    std::vector<std::vector<std::complex<double>>> xs;
    for (int c = 0; c < c_in; ++c) xs.push_back(naive_dft2(x.chan(c), H, W));

    const size_t per_mode = static_cast<size_t>(c_in) * c_out;
    const size_t im_base = static_cast<size_t>(2 * k) * k * per_mode;
    std::vector<std::vector<std::complex<double>>> ys(
        c_out, std::vector<std::complex<double>>(static_cast<size_t>(H) * wh));
    for (int r = 0; r < 2 * k; ++r) {
        const int m1 = r < k ? r : H - 2 * k + r;
        for (int m2 = 0; m2 < k; ++m2) {
            const size_t md = static_cast<size_t>(r) * k + m2;
            for (int o = 0; o < c_out; ++o) {
                std::complex<double> acc(0, 0);
                for (int i = 0; i < c_in; ++i) {
                    std::complex<double> wc(w[md * per_mode + o * c_in + i],
                                            w[im_base + md * per_mode + o * c_in + i]);
                    acc += wc * xs[i][static_cast<size_t>(m1) * W + m2];
                }
                ys[o][static_cast<size_t>(m1) * wh + m2] = acc;
            }
        }
    }
    specb::Field<double> out(c_out, H, W);
    for (int o = 0; o < c_out; ++o) {
        std::vector<std::complex<double>> full(static_cast<size_t>(H) * W);
        for (int m1 = 0; m1 < H; ++m1) {
            for (int m2 = 0; m2 < W; ++m2) {
                if (m2 < wh) {
                    full[static_cast<size_t>(m1) * W + m2] =
                        ys[o][static_cast<size_t>(m1) * wh + m2];
                } else {
                    full[static_cast<size_t>(m1) * W + m2] =
                        std::conj(ys[o][static_cast<size_t>((H - m1) % H) * wh + (W - m2)]);
                }
            }
        }
        auto real = naive_idft2_real(full, H, W);
        std::copy(real.begin(), real.end(), out.chan(o));
    }
    return out;
}

template <typename T>
double rel_l2(const std::vector<T>& a, const std::vector<T>& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        num += d * d;
        den += static_cast<double>(b[i]) * static_cast<double>(b[i]);
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

template <typename T>
double rel_l2_field(const specb::Field<T>& a, const specb::Field<T>& b) {
    return rel_l2(a.data, b.data);
}

}  // namespace specb::test
