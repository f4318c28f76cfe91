#pragma once

// Serial reference implementations of the parallel kernels. Same workers,
// no OpenMP: used by tests to pin down the parallel versions and by the
// kernel benchmark.

#include "specb/kernels.hpp"

namespace specb::kernels::serial {

template <typename T>
void pixelwise_linear(const T* x, T* y, const T* w, const T* b, int c_in, int c_out, size_t P) {
    const size_t nchunks = (P + detail::kChunk - 1) / detail::kChunk;
    for (size_t k = 0; k < nchunks; ++k) {
        const size_t p0 = k * detail::kChunk;
        detail::linear_chunk(x, y, w, b, c_in, c_out, P, p0, std::min(detail::kChunk, P - p0));
    }
}

template <typename T>
void pixelwise_linear_back_input(const T* g, T* dx, const T* w, int c_in, int c_out, size_t P) {
    const size_t nchunks = (P + detail::kChunk - 1) / detail::kChunk;
    for (size_t k = 0; k < nchunks; ++k) {
        const size_t p0 = k * detail::kChunk;
        detail::linear_back_input_chunk(g, dx, w, c_in, c_out, P, p0,
                                        std::min(detail::kChunk, P - p0));
    }
}

template <typename T>
void pixelwise_linear_back_params(const T* g, const T* x, T* dw, T* db, int c_in, int c_out,
                                  size_t P) {
    const size_t nchunks = (P + detail::kChunk - 1) / detail::kChunk;
    const size_t tile_sz = static_cast<size_t>(c_out) * c_in + c_out;
    std::vector<T> tiles(nchunks * tile_sz);
    for (size_t k = 0; k < nchunks; ++k) {
        const size_t p0 = k * detail::kChunk;
        detail::linear_back_params_chunk(g, x, tiles.data() + k * tile_sz, c_in, c_out, P, p0,
                                         std::min(detail::kChunk, P - p0));
    }
    for (size_t k = 0; k < nchunks; ++k) {
        const T* tile = tiles.data() + k * tile_sz;
        for (size_t e = 0; e < static_cast<size_t>(c_out) * c_in; ++e) dw[e] += tile[e];
        if (db) {
            for (int o = 0; o < c_out; ++o) db[o] += tile[static_cast<size_t>(c_out) * c_in + o];
        }
    }
}

template <typename T>
void activation_forward(const T* z, T* out, size_t n, Activation a) {
    if (a == Activation::Gelu) {
        gelu_forward_chunked(z, out, n, false);
        return;
    }
    for (size_t i = 0; i < n; ++i) out[i] = activate(z[i], a);
}

template <typename T>
void activation_backward(const T* z, const T* g, T* dz, size_t n, Activation a) {
    if (a == Activation::Gelu) {
        gelu_backward_chunked(z, g, dz, n, false);
        return;
    }
    for (size_t i = 0; i < n; ++i) dz[i] = g[i] * activate_grad(z[i], a);
}

template <typename T>
void spectral_apply(const std::complex<T>* x, std::complex<T>* y, const T* w, int c_in,
                    int c_out, int H, int wh, int k) {
    const size_t plane = static_cast<size_t>(H) * wh;
    std::memset(y, 0, sizeof(std::complex<T>) * plane * c_out);
    const size_t per_mode = static_cast<size_t>(c_in) * c_out;
    const size_t im_base = static_cast<size_t>(2 * k) * k * per_mode;
    for (int md = 0; md < 2 * k * k; ++md) {
        const int r = md / k;
        const int m2 = md % k;
        const int m1 = detail::mode_row(r, k, H);
        const size_t off = static_cast<size_t>(m1) * wh + m2;
        detail::spectral_mode_forward(x, y, w + static_cast<size_t>(md) * per_mode,
                                      w + im_base + static_cast<size_t>(md) * per_mode, c_in,
                                      c_out, plane, off);
    }
}

template <typename T>
void spectral_apply_backward(const std::complex<T>* x, const std::complex<T>* g,
                             std::complex<T>* dx, const T* w, T* dw, int c_in, int c_out, int H,
                             int wh, int k) {
    const size_t plane = static_cast<size_t>(H) * wh;
    std::memset(dx, 0, sizeof(std::complex<T>) * plane * c_in);
    const size_t per_mode = static_cast<size_t>(c_in) * c_out;
    const size_t im_base = static_cast<size_t>(2 * k) * k * per_mode;
    for (int md = 0; md < 2 * k * k; ++md) {
        const int r = md / k;
        const int m2 = md % k;
        const int m1 = detail::mode_row(r, k, H);
        const size_t off = static_cast<size_t>(m1) * wh + m2;
        detail::spectral_mode_backward(x, g, dx, w + static_cast<size_t>(md) * per_mode,
                                       w + im_base + static_cast<size_t>(md) * per_mode,
                                       dw + static_cast<size_t>(md) * per_mode,
                                       dw + im_base + static_cast<size_t>(md) * per_mode, c_in,
                                       c_out, plane, off);
    }
}

template <typename T>
void adam_step(T* p, const T* g, T* m, T* v, size_t n, T lr, T beta1, T beta2, T eps,
               T weight_decay, long step) {
    const T bc1 = T(1) - std::pow(beta1, static_cast<T>(step));
    const T bc2 = T(1) - std::pow(beta2, static_cast<T>(step));
    for (size_t i = 0; i < n; ++i) {
        const T gi = g[i] + weight_decay * p[i];
        m[i] = beta1 * m[i] + (T(1) - beta1) * gi;
        v[i] = beta2 * v[i] + (T(1) - beta2) * gi * gi;
        p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

}  // namespace specb::kernels::serial
