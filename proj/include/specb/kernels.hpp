#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "specb/gelu.hpp"

namespace specb::kernels {

// Shared per-row/per-chunk workers. The OpenMP entry points below and the
// serial reference implementations in kernels_serial.hpp call the exact same
// workers, so both paths produce bit-identical results regardless of thread
// count: every output element is written by one task with a fixed-order
// accumulation.

namespace detail {

inline constexpr size_t kChunk = 512;

/// y[o, chunk] = b[o] + sum_i w[o,i] * x[i, chunk] for all o, one pixel chunk.
/// Workers are noinline so parallel and serial callers share one compiled
/// instance and identical FP contraction.
template <typename T>
__attribute__((noinline, noclone)) void linear_chunk(const T* x, T* y, const T* w, const T* b, int c_in, int c_out,
                         size_t P, size_t p0, size_t len) {
    for (int o = 0; o < c_out; ++o) {
        T* yp = y + static_cast<size_t>(o) * P + p0;
        const T bo = b ? b[o] : T(0);
        for (size_t p = 0; p < len; ++p) yp[p] = bo;
        const T* wrow = w + static_cast<size_t>(o) * c_in;
        int i = 0;
        for (; i + 4 <= c_in; i += 4) {
            const T w0 = wrow[i], w1 = wrow[i + 1], w2 = wrow[i + 2], w3 = wrow[i + 3];
            const T* x0 = x + static_cast<size_t>(i) * P + p0;
            const T* x1 = x + static_cast<size_t>(i + 1) * P + p0;
            const T* x2 = x + static_cast<size_t>(i + 2) * P + p0;
            const T* x3 = x + static_cast<size_t>(i + 3) * P + p0;
            for (size_t p = 0; p < len; ++p) {
                yp[p] += w0 * x0[p] + w1 * x1[p] + w2 * x2[p] + w3 * x3[p];
            }
        }
        for (; i < c_in; ++i) {
            const T wi = wrow[i];
            const T* xi = x + static_cast<size_t>(i) * P + p0;
            for (size_t p = 0; p < len; ++p) yp[p] += wi * xi[p];
        }
    }
}

/// dx[i, chunk] = sum_o w[o,i] * g[o, chunk].
template <typename T>
__attribute__((noinline, noclone)) void linear_back_input_chunk(const T* g, T* dx, const T* w, int c_in, int c_out,
                                    size_t P, size_t p0, size_t len) {
    for (int i = 0; i < c_in; ++i) {
        T* dxp = dx + static_cast<size_t>(i) * P + p0;
        for (size_t p = 0; p < len; ++p) dxp[p] = T(0);
        for (int o = 0; o < c_out; ++o) {
            const T wo = w[static_cast<size_t>(o) * c_in + i];
            const T* gp = g + static_cast<size_t>(o) * P + p0;
            for (size_t p = 0; p < len; ++p) dxp[p] += wo * gp[p];
        }
    }
}

/// Dot product over 32 fixed lanes: vectorizes without reassociating a serial
/// chain and leaves enough independent accumulators to cover FMA latency.
/// The lane order is fixed, so results are identical across thread counts.
template <typename T>
inline T lane_dot(const T* a, const T* b, size_t n) {
    constexpr int L = 32;
    T lane[L] = {};
    size_t p = 0;
    for (; p + L <= n; p += L) {
        for (int l = 0; l < L; ++l) lane[l] += a[p + l] * b[p + l];
    }
    T acc = T(0);
    for (int l = 0; l < L; ++l) acc += lane[l];
    for (; p < n; ++p) acc += a[p] * b[p];
    return acc;
}

template <typename T>
inline T lane_sum(const T* a, size_t n) {
    constexpr int L = 32;
    T lane[L] = {};
    size_t p = 0;
    for (; p + L <= n; p += L) {
        for (int l = 0; l < L; ++l) lane[l] += a[p + l];
    }
    T acc = T(0);
    for (int l = 0; l < L; ++l) acc += lane[l];
    for (; p < n; ++p) acc += a[p];
    return acc;
}

/// Partial dw/db tile of one pixel chunk: tile has c_out*c_in + c_out entries
/// (weight block then bias block). Chunked tiles keep the streamed g/x data
/// L2-resident instead of re-reading full rows per (o, i) pair.
template <typename T>
__attribute__((noinline, noclone)) void linear_back_params_chunk(const T* g, const T* x, T* tile,
                                                                 int c_in, int c_out, size_t P,
                                                                 size_t p0, size_t len) {
    for (int o = 0; o < c_out; ++o) {
        const T* gp = g + static_cast<size_t>(o) * P + p0;
        T* trow = tile + static_cast<size_t>(o) * c_in;
        for (int i = 0; i < c_in; ++i) {
            trow[i] = lane_dot(gp, x + static_cast<size_t>(i) * P + p0, len);
        }
        tile[static_cast<size_t>(c_out) * c_in + o] = lane_sum(gp, len);
    }
}

}  // namespace detail

enum class Activation { Gelu, Relu, Tanh, Identity };

template <typename T>
inline T activate(T z, Activation a) {
    switch (a) {
        case Activation::Gelu:
            return T(0.5) * z * (T(1) + std::erf(z * T(0.70710678118654752440)));
        case Activation::Relu:
            return z > T(0) ? z : T(0);
        case Activation::Tanh:
            return std::tanh(z);
        case Activation::Identity:
            return z;
    }
    return z;
}

template <typename T>
inline T activate_grad(T z, Activation a) {
    switch (a) {
        case Activation::Gelu: {
            const T phi = T(0.5) * (T(1) + std::erf(z * T(0.70710678118654752440)));
            const T pdf = T(0.39894228040143267794) * std::exp(T(-0.5) * z * z);
            return phi + z * pdf;
        }
        case Activation::Relu:
            return z > T(0) ? T(1) : T(0);
        case Activation::Tanh: {
            const T t = std::tanh(z);
            return T(1) - t * t;
        }
        case Activation::Identity:
            return T(1);
    }
    return T(1);
}

/// Pixel-wise linear map over channels: y (c_out, P) = W (c_out, c_in) x (c_in, P) + b.
template <typename T>
void pixelwise_linear(const T* x, T* y, const T* w, const T* b, int c_in, int c_out, size_t P) {
    const size_t nchunks = (P + detail::kChunk - 1) / detail::kChunk;
#pragma omp parallel for schedule(static)
    for (size_t k = 0; k < nchunks; ++k) {
        const size_t p0 = k * detail::kChunk;
        detail::linear_chunk(x, y, w, b, c_in, c_out, P, p0, std::min(detail::kChunk, P - p0));
    }
}

template <typename T>
void pixelwise_linear_back_input(const T* g, T* dx, const T* w, int c_in, int c_out, size_t P) {
    const size_t nchunks = (P + detail::kChunk - 1) / detail::kChunk;
#pragma omp parallel for schedule(static)
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
#pragma omp parallel for schedule(static)
    for (size_t k = 0; k < nchunks; ++k) {
        const size_t p0 = k * detail::kChunk;
        detail::linear_back_params_chunk(g, x, tiles.data() + k * tile_sz, c_in, c_out, P, p0,
                                         std::min(detail::kChunk, P - p0));
    }
    // fixed chunk-order reduction, independent of the thread count
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
        gelu_forward_chunked(z, out, n, true);
        return;
    }
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; ++i) out[i] = activate(z[i], a);
}

/// dz[i] = g[i] * act'(z[i]); z is the pre-activation.
template <typename T>
void activation_backward(const T* z, const T* g, T* dz, size_t n, Activation a) {
    if (a == Activation::Gelu) {
        gelu_backward_chunked(z, g, dz, n, true);
        return;
    }
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; ++i) dz[i] = g[i] * activate_grad(z[i], a);
}

namespace detail {

/// Enumerate the retained (m1, m2) block of a truncated half spectrum:
/// row slot r < k maps to m1 = r, slot r >= k maps to m1 = H - 2k + r.
inline int mode_row(int r, int k, int H) { return r < k ? r : H - 2 * k + r; }

inline constexpr int kMaxChannels = 512;

/// One retained mode of the spectral linear transformation:
/// y[m] = W[m] x[m], a complex (c_out x c_in) mat-vec over channels.
/// Weights are stored split-complex per mode: all re, then all im.
/// Channel vectors are gathered once into stack arrays so the inner products
/// run over contiguous data.
template <typename T>
__attribute__((noinline, noclone)) void spectral_mode_forward(const std::complex<T>* x,
                                                              std::complex<T>* y, const T* w_re,
                                                              const T* w_im, int c_in, int c_out,
                                                              size_t plane, size_t off) {
    T xr[kMaxChannels], xi[kMaxChannels];
    for (int i = 0; i < c_in; ++i) {
        const std::complex<T> v = x[static_cast<size_t>(i) * plane + off];
        xr[i] = v.real();
        xi[i] = v.imag();
    }
    for (int o = 0; o < c_out; ++o) {
        const T* wr = w_re + static_cast<size_t>(o) * c_in;
        const T* wi = w_im + static_cast<size_t>(o) * c_in;
        T acc_re = T(0), acc_im = T(0);
        for (int i = 0; i < c_in; ++i) {
            acc_re += wr[i] * xr[i] - wi[i] * xi[i];
            acc_im += wr[i] * xi[i] + wi[i] * xr[i];
        }
        y[static_cast<size_t>(o) * plane + off] = std::complex<T>(acc_re, acc_im);
    }
}

/// Backward of one retained mode. Gradients follow the real-pair convention
/// (dual numbers stored as complex): dW[m] += g conj(x), dx[m] = W[m]^H g.
template <typename T>
__attribute__((noinline, noclone)) void spectral_mode_backward(const std::complex<T>* x,
                                                               const std::complex<T>* g,
                                                               std::complex<T>* dx, const T* w_re,
                                                               const T* w_im, T* dw_re, T* dw_im,
                                                               int c_in, int c_out, size_t plane,
                                                               size_t off) {
    T xr[kMaxChannels], xi[kMaxChannels], gr[kMaxChannels], gi[kMaxChannels];
    T dxr[kMaxChannels], dxi[kMaxChannels];
    for (int i = 0; i < c_in; ++i) {
        const std::complex<T> v = x[static_cast<size_t>(i) * plane + off];
        xr[i] = v.real();
        xi[i] = v.imag();
        dxr[i] = T(0);
        dxi[i] = T(0);
    }
    for (int o = 0; o < c_out; ++o) {
        const std::complex<T> v = g[static_cast<size_t>(o) * plane + off];
        gr[o] = v.real();
        gi[o] = v.imag();
    }
    for (int o = 0; o < c_out; ++o) {
        const T* wr = w_re + static_cast<size_t>(o) * c_in;
        const T* wi = w_im + static_cast<size_t>(o) * c_in;
        T* dwr = dw_re + static_cast<size_t>(o) * c_in;
        T* dwi = dw_im + static_cast<size_t>(o) * c_in;
        const T gro = gr[o], gio = gi[o];
        for (int i = 0; i < c_in; ++i) {
            dwr[i] += gro * xr[i] + gio * xi[i];
            dwi[i] += gio * xr[i] - gro * xi[i];
            dxr[i] += wr[i] * gro + wi[i] * gio;
            dxi[i] += wr[i] * gio - wi[i] * gro;
        }
    }
    for (int i = 0; i < c_in; ++i) {
        dx[static_cast<size_t>(i) * plane + off] = std::complex<T>(dxr[i], dxi[i]);
    }
}

}  // namespace detail

/// Spectral linear transformation on a truncated half spectrum.
/// x: (c_in, H, W/2+1), y: (c_out, H, W/2+1) zero outside the kept block.
/// w: split-complex (2k*k modes, c_out, c_in), re block then im block.
template <typename T>
void spectral_apply(const std::complex<T>* x, std::complex<T>* y, const T* w, int c_in,
                    int c_out, int H, int wh, int k) {
    if (c_in > detail::kMaxChannels || c_out > detail::kMaxChannels) {
        throw std::invalid_argument("spectral_apply: channel count exceeds the compiled limit");
    }
    const size_t plane = static_cast<size_t>(H) * wh;
    std::memset(y, 0, sizeof(std::complex<T>) * plane * c_out);
    const size_t per_mode = static_cast<size_t>(c_in) * c_out;
    const size_t im_base = static_cast<size_t>(2 * k) * k * per_mode;
    const int n_modes = 2 * k * k;
#pragma omp parallel for schedule(static)
    for (int md = 0; md < n_modes; ++md) {
        const int r = md / k;
        const int m2 = md % k;
        const int m1 = detail::mode_row(r, k, H);
        const size_t off = static_cast<size_t>(m1) * wh + m2;
        detail::spectral_mode_forward(x, y, w + static_cast<size_t>(md) * per_mode,
                                      w + im_base + static_cast<size_t>(md) * per_mode, c_in,
                                      c_out, plane, off);
    }
}

/// Backward of spectral_apply. dx is fully overwritten (zero outside block),
/// dw is accumulated.
template <typename T>
void spectral_apply_backward(const std::complex<T>* x, const std::complex<T>* g,
                             std::complex<T>* dx, const T* w, T* dw, int c_in, int c_out, int H,
                             int wh, int k) {
    if (c_in > detail::kMaxChannels || c_out > detail::kMaxChannels) {
        throw std::invalid_argument("spectral_apply: channel count exceeds the compiled limit");
    }
    const size_t plane = static_cast<size_t>(H) * wh;
    std::memset(dx, 0, sizeof(std::complex<T>) * plane * c_in);
    const size_t per_mode = static_cast<size_t>(c_in) * c_out;
    const size_t im_base = static_cast<size_t>(2 * k) * k * per_mode;
    const int n_modes = 2 * k * k;
#pragma omp parallel for schedule(static)
    for (int md = 0; md < n_modes; ++md) {
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

/// Adam with L2 weight decay folded into the gradient, bias-corrected.
template <typename T>
void adam_step(T* p, const T* g, T* m, T* v, size_t n, T lr, T beta1, T beta2, T eps,
               T weight_decay, long step) {
    const T bc1 = T(1) - std::pow(beta1, static_cast<T>(step));
    const T bc2 = T(1) - std::pow(beta2, static_cast<T>(step));
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; ++i) {
        const T gi = g[i] + weight_decay * p[i];
        m[i] = beta1 * m[i] + (T(1) - beta1) * gi;
        v[i] = beta2 * v[i] + (T(1) - beta2) * gi * gi;
        const T mhat = m[i] / bc1;
        const T vhat = v[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

template <typename T>
void axpy(T* y, const T* x, T a, size_t n) {
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename T>
void add3(T* out, const T* a, const T* b, const T* c, size_t n) {
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i] + c[i];
}

template <typename T>
void add2(T* out, const T* a, const T* b, size_t n) {
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

}  // namespace specb::kernels
