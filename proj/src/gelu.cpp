// Compiled with -ffast-math (see CMakeLists) so erf and exp lower to their
// libmvec vector variants. Only elementwise maps live here: each output
// depends on one input, so the relaxed FP rules cannot reassociate anything
// across elements.

#include "specb/gelu.hpp"

#include <cmath>

namespace specb::kernels {

namespace {

constexpr size_t kChunk = 512;

template <typename T>
__attribute__((noinline, noclone)) void gelu_chunk(const T* z, T* out, size_t len) {
#pragma omp simd
    for (size_t i = 0; i < len; ++i) {
        out[i] = T(0.5) * z[i] * (T(1) + std::erf(z[i] * T(0.70710678118654752440)));
    }
}

template <typename T>
__attribute__((noinline, noclone)) void gelu_grad_chunk(const T* z, const T* g, T* dz, size_t len) {
#pragma omp simd
    for (size_t i = 0; i < len; ++i) {
        const T phi = T(0.5) * (T(1) + std::erf(z[i] * T(0.70710678118654752440)));
        const T pdf = T(0.39894228040143267794) * std::exp(T(-0.5) * z[i] * z[i]);
        dz[i] = g[i] * (phi + z[i] * pdf);
    }
}

template <typename T>
void forward_impl(const T* z, T* out, size_t n, bool parallel) {
    const size_t nchunks = (n + kChunk - 1) / kChunk;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (size_t c = 0; c < nchunks; ++c) {
            const size_t p0 = c * kChunk;
            gelu_chunk(z + p0, out + p0, std::min(kChunk, n - p0));
        }
    } else {
        for (size_t c = 0; c < nchunks; ++c) {
            const size_t p0 = c * kChunk;
            gelu_chunk(z + p0, out + p0, std::min(kChunk, n - p0));
        }
    }
}

template <typename T>
void backward_impl(const T* z, const T* g, T* dz, size_t n, bool parallel) {
    const size_t nchunks = (n + kChunk - 1) / kChunk;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (size_t c = 0; c < nchunks; ++c) {
            const size_t p0 = c * kChunk;
            gelu_grad_chunk(z + p0, g + p0, dz + p0, std::min(kChunk, n - p0));
        }
    } else {
        for (size_t c = 0; c < nchunks; ++c) {
            const size_t p0 = c * kChunk;
            gelu_grad_chunk(z + p0, g + p0, dz + p0, std::min(kChunk, n - p0));
        }
    }
}

}  // namespace

void gelu_forward_chunked(const float* z, float* out, size_t n, bool parallel) {
    forward_impl(z, out, n, parallel);
}
void gelu_forward_chunked(const double* z, double* out, size_t n, bool parallel) {
    forward_impl(z, out, n, parallel);
}
void gelu_backward_chunked(const float* z, const float* g, float* dz, size_t n, bool parallel) {
    backward_impl(z, g, dz, n, parallel);
}
void gelu_backward_chunked(const double* z, const double* g, double* dz, size_t n, bool parallel) {
    backward_impl(z, g, dz, n, parallel);
}

}  // namespace specb::kernels
