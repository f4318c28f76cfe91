#pragma once

#include <cstddef>

namespace specb::kernels {

// GELU maps compiled in a dedicated translation unit so the erf/exp calls
// vectorize through libmvec. Work is processed in fixed 512-element chunks;
// the lane split never depends on the thread count, so results are identical
// for any number of workers.

void gelu_forward_chunked(const float* z, float* out, size_t n, bool parallel);
void gelu_forward_chunked(const double* z, double* out, size_t n, bool parallel);
void gelu_backward_chunked(const float* z, const float* g, float* dz, size_t n, bool parallel);
void gelu_backward_chunked(const double* z, const double* g, double* dz, size_t n, bool parallel);

}  // namespace specb::kernels
