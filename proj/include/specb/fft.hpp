#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "specb/field.hpp"

namespace specb {
namespace fft {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Precomputed tables for a 1D complex transform of length n.
/// Non-power-of-two lengths go through Bluestein's chirp-z algorithm.
template <typename T>
struct Plan {
    int n = 0;
    bool pow2 = false;
    std::vector<int> bitrev;
    std::vector<std::complex<T>> twiddle;  // e^{-2*pi*i*j/n}, j < n/2

    // Bluestein tables
    int conv_n = 0;
    std::vector<std::complex<T>> chirp;        // e^{-i*pi*j^2/n}, j < n
    std::vector<std::complex<T>> kernel_fwd;   // FFT of padded conj-chirp
    std::vector<std::complex<T>> kernel_inv;   // FFT of padded chirp
    std::shared_ptr<const Plan<T>> sub;        // power-of-two subplan
};

template <typename T>
void fft_pow2(std::complex<T>* a, const Plan<T>& plan, bool inverse) {
    const int n = plan.n;
    for (int i = 0; i < n; ++i) {
        int j = plan.bitrev[i];
        if (j > i) std::swap(a[i], a[j]);
    }
    // butterflies in explicit real arithmetic; the inverse conjugates the
    // twiddle via a hoisted sign
    T* d = reinterpret_cast<T*>(a);
    const T sign = inverse ? T(-1) : T(1);
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len >> 1;
        const int step = n / len;
        for (int base = 0; base < n; base += len) {
            for (int j = 0; j < half; ++j) {
                const std::complex<T>& tw = plan.twiddle[static_cast<size_t>(j) * step];
                const T wr = tw.real();
                const T wi = sign * tw.imag();
                const size_t ia = 2 * static_cast<size_t>(base + j);
                const size_t ib = 2 * static_cast<size_t>(base + j + half);
                const T vr = d[ib] * wr - d[ib + 1] * wi;
                const T vi = d[ib] * wi + d[ib + 1] * wr;
                const T ur = d[ia];
                const T ui = d[ia + 1];
                d[ia] = ur + vr;
                d[ia + 1] = ui + vi;
                d[ib] = ur - vr;
                d[ib + 1] = ui - vi;
            }
        }
    }
}

template <typename T>
std::shared_ptr<const Plan<T>> make_plan(int n);

template <typename T>
const Plan<T>& get_plan(int n) {
    static std::map<int, std::shared_ptr<const Plan<T>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_plan<T>(n)).first;
    return *it->second;
}

template <typename T>
std::shared_ptr<const Plan<T>> make_plan(int n) {
    if (n < 1) throw std::invalid_argument("fft: transform length must be >= 1");
    auto plan = std::make_shared<Plan<T>>();
    plan->n = n;
    plan->pow2 = is_pow2(n);
    if (plan->pow2) {
        plan->bitrev.resize(n);
        int bits = 0;
        while ((1 << bits) < n) ++bits;
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
            plan->bitrev[i] = r;
        }
        plan->twiddle.resize(std::max(1, n / 2));
        for (int j = 0; j < n / 2; ++j) {
            double ang = -2.0 * kPi * j / n;
            plan->twiddle[j] = std::complex<T>(static_cast<T>(std::cos(ang)),
                                               static_cast<T>(std::sin(ang)));
        }
        return plan;
    }
    // Bluestein: circular convolution of chirped input with the conjugate chirp,
    // carried out at a power-of-two size >= 2n-1.
    int m = 1;
    while (m < 2 * n - 1) m <<= 1;
    plan->conv_n = m;
    plan->sub = make_plan<T>(m);
    plan->chirp.resize(n);
    for (int j = 0; j < n; ++j) {
        // j^2 mod 2n keeps the chirp angle well conditioned for large j
        long long jj = (static_cast<long long>(j) * j) % (2LL * n);
        double ang = -kPi * static_cast<double>(jj) / n;
        plan->chirp[j] =
            std::complex<T>(static_cast<T>(std::cos(ang)), static_cast<T>(std::sin(ang)));
    }
    auto build_kernel = [&](bool inverse) {
        std::vector<std::complex<T>> b(m, std::complex<T>(0, 0));
        for (int j = 0; j < n; ++j) {
            std::complex<T> c = inverse ? plan->chirp[j] : std::conj(plan->chirp[j]);
            b[j] = c;
            if (j > 0) b[m - j] = c;
        }
        fft_pow2(b.data(), *plan->sub, false);
        return b;
    };
    plan->kernel_fwd = build_kernel(false);
    plan->kernel_inv = build_kernel(true);
    return plan;
}

/// In-place 1D DFT, unnormalized: sign -1 (forward) when inverse == false.
template <typename T>
void transform(std::complex<T>* a, const Plan<T>& plan, bool inverse,
               std::vector<std::complex<T>>* scratch = nullptr) {
    if (plan.n == 1) return;
    if (plan.pow2) {
        fft_pow2(a, plan, inverse);
        return;
    }
    const int n = plan.n;
    const int m = plan.conv_n;
    std::vector<std::complex<T>> local;
    std::vector<std::complex<T>>& buf = scratch ? *scratch : local;
    buf.assign(m, std::complex<T>(0, 0));
    for (int j = 0; j < n; ++j) {
        std::complex<T> c = inverse ? std::conj(plan.chirp[j]) : plan.chirp[j];
        buf[j] = a[j] * c;
    }
    fft_pow2(buf.data(), *plan.sub, false);
    const auto& kernel = inverse ? plan.kernel_inv : plan.kernel_fwd;
    for (int j = 0; j < m; ++j) buf[j] *= kernel[j];
    fft_pow2(buf.data(), *plan.sub, true);
    const T inv_m = static_cast<T>(1) / static_cast<T>(m);
    for (int k = 0; k < n; ++k) {
        std::complex<T> c = inverse ? std::conj(plan.chirp[k]) : plan.chirp[k];
        a[k] = buf[k] * inv_m * c;
    }
}

/// Scratch buffers reused across row/column passes of one 2D transform.
template <typename T>
struct Workspace2d {
    std::vector<std::complex<T>> line;  // length max(H, W)
    std::vector<std::complex<T>> bluestein;
    std::vector<std::complex<T>> spec_copy;
    std::vector<std::complex<T>> row_full, row_full1;
    std::vector<T> bre, bim;  // batched SoA planes, length n * kBatch
};

inline constexpr int kBatch = 8;

/// Radix-2 transform of kBatch interleaved signals: element i of signal b
/// lives at [i * kBatch + b]. Same butterfly sequence as the scalar path.
template <typename T>
__attribute__((noinline, noclone)) void fft_pow2_batch(T* re, T* im, const Plan<T>& plan,
                                                       bool inverse) {
    const int n = plan.n;
    for (int i = 0; i < n; ++i) {
        const int j = plan.bitrev[i];
        if (j > i) {
            for (int b = 0; b < kBatch; ++b) {
                std::swap(re[i * kBatch + b], re[j * kBatch + b]);
                std::swap(im[i * kBatch + b], im[j * kBatch + b]);
            }
        }
    }
    const T sign = inverse ? T(-1) : T(1);
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len >> 1;
        const int step = n / len;
        for (int base = 0; base < n; base += len) {
            for (int j = 0; j < half; ++j) {
                const std::complex<T>& tw = plan.twiddle[static_cast<size_t>(j) * step];
                const T wr = tw.real();
                const T wi = sign * tw.imag();
                T* ra = re + static_cast<size_t>(base + j) * kBatch;
                T* ia = im + static_cast<size_t>(base + j) * kBatch;
                T* rb = re + static_cast<size_t>(base + j + half) * kBatch;
                T* ib = im + static_cast<size_t>(base + j + half) * kBatch;
                for (int b = 0; b < kBatch; ++b) {
                    const T vr = rb[b] * wr - ib[b] * wi;
                    const T vi = rb[b] * wi + ib[b] * wr;
                    rb[b] = ra[b] - vr;
                    ib[b] = ia[b] - vi;
                    ra[b] += vr;
                    ia[b] += vi;
                }
            }
        }
    }
}

/// Forward half-spectrum transform of one channel, unnormalized DFT
/// convention, generic sizes. out has H*(W/2+1) entries.
template <typename T>
void rfft2_channel_scalar(const T* in, std::complex<T>* out, int H, int W,
                          const Plan<T>& row_plan, const Plan<T>& col_plan, Workspace2d<T>& ws) {
    const int wh = W / 2 + 1;
    ws.line.resize(static_cast<size_t>(std::max(H, W)));
    // Row pass: two real rows packed into one complex transform.
    for (int r = 0; r < H; r += 2) {
        const bool pair = (r + 1 < H);
        const T* row0 = in + static_cast<size_t>(r) * W;
        const T* row1 = pair ? in + static_cast<size_t>(r + 1) * W : nullptr;
        for (int j = 0; j < W; ++j) {
            ws.line[j] = std::complex<T>(row0[j], pair ? row1[j] : T(0));
        }
        transform(ws.line.data(), row_plan, false, &ws.bluestein);
        std::complex<T>* o0 = out + static_cast<size_t>(r) * wh;
        std::complex<T>* o1 = pair ? out + static_cast<size_t>(r + 1) * wh : nullptr;
        for (int m = 0; m < wh; ++m) {
            std::complex<T> z = ws.line[m];
            std::complex<T> zc = std::conj(ws.line[(W - m) % W]);
            o0[m] = (z + zc) * T(0.5);
            if (pair) {
                std::complex<T> d = (z - zc) * T(0.5);
                o1[m] = std::complex<T>(d.imag(), -d.real());  // d / i
            }
        }
    }
    // Column pass.
    for (int m = 0; m < wh; ++m) {
        for (int i = 0; i < H; ++i) ws.line[i] = out[static_cast<size_t>(i) * wh + m];
        transform(ws.line.data(), col_plan, false, &ws.bluestein);
        for (int i = 0; i < H; ++i) out[static_cast<size_t>(i) * wh + m] = ws.line[i];
    }
}

/// Power-of-two fast path: rows and columns go through the 8-wide batched
/// radix-2 kernel. Same packing and unpacking arithmetic as the scalar path.
template <typename T>
void rfft2_channel_batched(const T* in, std::complex<T>* out, int H, int W,
                           const Plan<T>& row_plan, const Plan<T>& col_plan,
                           Workspace2d<T>& ws) {
    const int wh = W / 2 + 1;
    const int n_pseudo = (H + 1) / 2;  // packed row pairs
    ws.bre.resize(static_cast<size_t>(std::max(H, W)) * kBatch);
    ws.bim.resize(static_cast<size_t>(std::max(H, W)) * kBatch);
    T* re = ws.bre.data();
    T* im = ws.bim.data();

    for (int p0 = 0; p0 < n_pseudo; p0 += kBatch) {
        const int nb = std::min(kBatch, n_pseudo - p0);
        for (int j = 0; j < W; ++j) {
            for (int b = 0; b < kBatch; ++b) {
                const int p = p0 + b;
                const int r0 = 2 * p, r1 = 2 * p + 1;
                re[j * kBatch + b] = (b < nb) ? in[static_cast<size_t>(r0) * W + j] : T(0);
                im[j * kBatch + b] =
                    (b < nb && r1 < H) ? in[static_cast<size_t>(r1) * W + j] : T(0);
            }
        }
        fft_pow2_batch(re, im, row_plan, false);
        for (int m = 0; m < wh; ++m) {
            const int mm = (W - m) % W;
            for (int b = 0; b < nb; ++b) {
                const int p = p0 + b;
                const int r0 = 2 * p, r1 = 2 * p + 1;
                const T zr = re[m * kBatch + b], zi = im[m * kBatch + b];
                const T cr = re[mm * kBatch + b], ci = -im[mm * kBatch + b];
                out[static_cast<size_t>(r0) * wh + m] =
                    std::complex<T>(T(0.5) * (zr + cr), T(0.5) * (zi + ci));
                if (r1 < H) {
                    const T dr = T(0.5) * (zr - cr), di = T(0.5) * (zi - ci);
                    out[static_cast<size_t>(r1) * wh + m] = std::complex<T>(di, -dr);
                }
            }
        }
    }
    for (int m0 = 0; m0 < wh; m0 += kBatch) {
        const int nb = std::min(kBatch, wh - m0);
        for (int i = 0; i < H; ++i) {
            const std::complex<T>* src = out + static_cast<size_t>(i) * wh + m0;
            for (int b = 0; b < kBatch; ++b) {
                re[i * kBatch + b] = (b < nb) ? src[b].real() : T(0);
                im[i * kBatch + b] = (b < nb) ? src[b].imag() : T(0);
            }
        }
        fft_pow2_batch(re, im, col_plan, false);
        for (int i = 0; i < H; ++i) {
            std::complex<T>* dst = out + static_cast<size_t>(i) * wh + m0;
            for (int b = 0; b < nb; ++b) {
                dst[b] = std::complex<T>(re[i * kBatch + b], im[i * kBatch + b]);
            }
        }
    }
}

template <typename T>
void rfft2_channel(const T* in, std::complex<T>* out, int H, int W, const Plan<T>& row_plan,
                   const Plan<T>& col_plan, Workspace2d<T>& ws) {
    if (row_plan.pow2 && col_plan.pow2) {
        rfft2_channel_batched(in, out, H, W, row_plan, col_plan, ws);
    } else {
        rfft2_channel_scalar(in, out, H, W, row_plan, col_plan, ws);
    }
}

template <typename T>
void project_self_conjugate_columns(std::vector<std::complex<T>>& z, int H, int W) {
    const int wh = W / 2 + 1;
    auto project_column = [&](int m) {
        z[m] = std::complex<T>(z[m].real(), T(0));
        if (H % 2 == 0) {
            size_t idx = static_cast<size_t>(H / 2) * wh + m;
            z[idx] = std::complex<T>(z[idx].real(), T(0));
        }
        for (int i = 1; i < (H + 1) / 2; ++i) {
            size_t a = static_cast<size_t>(i) * wh + m;
            size_t b = static_cast<size_t>(H - i) * wh + m;
            std::complex<T> v = (z[a] + std::conj(z[b])) * T(0.5);
            z[a] = v;
            z[b] = std::conj(v);
        }
    };
    project_column(0);
    if (W % 2 == 0 && W / 2 > 0) project_column(W / 2);
}

/// Inverse transform of one channel: 1/(H*W)-normalized, real output, generic
/// sizes. Self-conjugate columns (m2 = 0 and, for even W, m2 = W/2) are
/// projected onto their Hermitian part, which is what a real-output transform
/// enforces.
template <typename T>
void irfft2_channel_scalar(const std::complex<T>* in, T* out, int H, int W,
                           const Plan<T>& row_plan, const Plan<T>& col_plan,
                           Workspace2d<T>& ws) {
    const int wh = W / 2 + 1;
    std::vector<std::complex<T>>& z = ws.spec_copy;
    z.assign(in, in + static_cast<size_t>(H) * wh);
    project_self_conjugate_columns(z, H, W);

    ws.line.resize(static_cast<size_t>(std::max(H, W)));
    // Column pass: unnormalized inverse along rows of the half spectrum.
    for (int m = 0; m < wh; ++m) {
        for (int i = 0; i < H; ++i) ws.line[i] = z[static_cast<size_t>(i) * wh + m];
        transform(ws.line.data(), col_plan, true, &ws.bluestein);
        for (int i = 0; i < H; ++i) z[static_cast<size_t>(i) * wh + m] = ws.line[i];
    }
    // Row pass: Hermitian extension, two rows per complex transform.
    const T scale = static_cast<T>(1) / (static_cast<T>(H) * static_cast<T>(W));
    ws.row_full.resize(static_cast<size_t>(W));
    ws.row_full1.resize(static_cast<size_t>(W));
    std::vector<std::complex<T>>& row_full = ws.row_full;
    std::vector<std::complex<T>>& row_full1 = ws.row_full1;
    for (int r = 0; r < H; r += 2) {
        const bool pair = (r + 1 < H);
        const std::complex<T>* z0 = z.data() + static_cast<size_t>(r) * wh;
        const std::complex<T>* z1 = pair ? z.data() + static_cast<size_t>(r + 1) * wh : nullptr;
        for (int m = 0; m < W; ++m) {
            row_full[m] = (m < wh) ? z0[m] : std::conj(z0[W - m]);
            if (pair) row_full1[m] = (m < wh) ? z1[m] : std::conj(z1[W - m]);
        }
        if (pair) {
            for (int m = 0; m < W; ++m) {
                ws.line[m] = row_full[m] + std::complex<T>(-row_full1[m].imag(), row_full1[m].real());
            }
            transform(ws.line.data(), row_plan, true, &ws.bluestein);
            T* o0 = out + static_cast<size_t>(r) * W;
            T* o1 = out + static_cast<size_t>(r + 1) * W;
            for (int j = 0; j < W; ++j) {
                o0[j] = ws.line[j].real() * scale;
                o1[j] = ws.line[j].imag() * scale;
            }
        } else {
            for (int m = 0; m < W; ++m) ws.line[m] = row_full[m];
            transform(ws.line.data(), row_plan, true, &ws.bluestein);
            T* o0 = out + static_cast<size_t>(r) * W;
            for (int j = 0; j < W; ++j) o0[j] = ws.line[j].real() * scale;
        }
    }
}

/// Power-of-two fast path for the inverse, batched like the forward.
template <typename T>
void irfft2_channel_batched(const std::complex<T>* in, T* out, int H, int W,
                            const Plan<T>& row_plan, const Plan<T>& col_plan,
                            Workspace2d<T>& ws) {
    const int wh = W / 2 + 1;
    std::vector<std::complex<T>>& z = ws.spec_copy;
    z.assign(in, in + static_cast<size_t>(H) * wh);
    project_self_conjugate_columns(z, H, W);

    ws.bre.resize(static_cast<size_t>(std::max(H, W)) * kBatch);
    ws.bim.resize(static_cast<size_t>(std::max(H, W)) * kBatch);
    T* re = ws.bre.data();
    T* im = ws.bim.data();

    // Column pass: unnormalized inverse, batches of 8 columns.
    for (int m0 = 0; m0 < wh; m0 += kBatch) {
        const int nb = std::min(kBatch, wh - m0);
        for (int i = 0; i < H; ++i) {
            const std::complex<T>* src = z.data() + static_cast<size_t>(i) * wh + m0;
            for (int b = 0; b < kBatch; ++b) {
                re[i * kBatch + b] = (b < nb) ? src[b].real() : T(0);
                im[i * kBatch + b] = (b < nb) ? src[b].imag() : T(0);
            }
        }
        fft_pow2_batch(re, im, col_plan, true);
        for (int i = 0; i < H; ++i) {
            std::complex<T>* dst = z.data() + static_cast<size_t>(i) * wh + m0;
            for (int b = 0; b < nb; ++b) {
                dst[b] = std::complex<T>(re[i * kBatch + b], im[i * kBatch + b]);
            }
        }
    }

    // Row pass: Hermitian extension with the two-row pack, batches of 8
    // pseudo-rows. V = A_r + i A_{r+1}.
    const T scale = static_cast<T>(1) / (static_cast<T>(H) * static_cast<T>(W));
    const int n_pseudo = (H + 1) / 2;
    for (int p0 = 0; p0 < n_pseudo; p0 += kBatch) {
        const int nb = std::min(kBatch, n_pseudo - p0);
        for (int m = 0; m < W; ++m) {
            const int src_m = (m < wh) ? m : W - m;
            const T conj_sign = (m < wh) ? T(1) : T(-1);
            for (int b = 0; b < kBatch; ++b) {
                const int p = p0 + b;
                const int r0 = 2 * p, r1 = 2 * p + 1;
                if (b >= nb) {
                    re[m * kBatch + b] = T(0);
                    im[m * kBatch + b] = T(0);
                    continue;
                }
                const std::complex<T> a0 = z[static_cast<size_t>(r0) * wh + src_m];
                const T a0r = a0.real(), a0i = conj_sign * a0.imag();
                T a1r = T(0), a1i = T(0);
                if (r1 < H) {
                    const std::complex<T> a1 = z[static_cast<size_t>(r1) * wh + src_m];
                    a1r = a1.real();
                    a1i = conj_sign * a1.imag();
                }
                re[m * kBatch + b] = a0r - a1i;
                im[m * kBatch + b] = a0i + a1r;
            }
        }
        fft_pow2_batch(re, im, row_plan, true);
        for (int b = 0; b < nb; ++b) {
            const int p = p0 + b;
            const int r0 = 2 * p, r1 = 2 * p + 1;
            T* o0 = out + static_cast<size_t>(r0) * W;
            T* o1 = (r1 < H) ? out + static_cast<size_t>(r1) * W : nullptr;
            for (int j = 0; j < W; ++j) {
                o0[j] = re[j * kBatch + b] * scale;
                if (o1) o1[j] = im[j * kBatch + b] * scale;
            }
        }
    }
}

template <typename T>
void irfft2_channel(const std::complex<T>* in, T* out, int H, int W, const Plan<T>& row_plan,
                    const Plan<T>& col_plan, Workspace2d<T>& ws) {
    if (row_plan.pow2 && col_plan.pow2) {
        irfft2_channel_batched(in, out, H, W, row_plan, col_plan, ws);
    } else {
        irfft2_channel_scalar(in, out, H, W, row_plan, col_plan, ws);
    }
}

}  // namespace fft

/// Reshape helpers for reused output buffers; contents are not preserved.
template <typename T>
void ensure_field(Field<T>& f, int c, int h, int w) {
    if (f.channels == c && f.height == h && f.width == w) return;
    f.channels = c;
    f.height = h;
    f.width = w;
    f.data.resize(static_cast<size_t>(c) * h * w);
}

template <typename T>
void ensure_spec(HalfSpectrum<T>& s, int c, int h, int w) {
    if (s.channels == c && s.height == h && s.width == w) return;
    s.channels = c;
    s.height = h;
    s.width = w;
    s.data.resize(static_cast<size_t>(c) * h * (w / 2 + 1));
}

/// Forward 2D transform of a real field, unnormalized: Parseval holds as
/// sum |X|^2 over the mirrored full spectrum = H*W * sum x^2.
template <typename T>
void forward_rfft2_into(const Field<T>& f, HalfSpectrum<T>& out) {
    ensure_spec(out, f.channels, f.height, f.width);
    const auto& row_plan = fft::get_plan<T>(f.width);
    const auto& col_plan = fft::get_plan<T>(f.height);
#pragma omp parallel
    {
        fft::Workspace2d<T> ws;
#pragma omp for schedule(static)
        for (int c = 0; c < f.channels; ++c) {
            fft::rfft2_channel(f.chan(c), out.chan(c), f.height, f.width, row_plan, col_plan, ws);
        }
    }
}

template <typename T>
HalfSpectrum<T> forward_rfft2(const Field<T>& f) {
    HalfSpectrum<T> out;
    forward_rfft2_into(f, out);
    return out;
}

/// Inverse of forward_rfft2 (1/N normalization), producing a real field.
template <typename T>
void inverse_rfft2_into(const HalfSpectrum<T>& s, int H, int W, Field<T>& out) {
    if (s.height != H || s.width != W) {
        throw std::invalid_argument("inverse_rfft2: spectrum shape inconsistent with (H, W)");
    }
    ensure_field(out, s.channels, H, W);
    const auto& row_plan = fft::get_plan<T>(W);
    const auto& col_plan = fft::get_plan<T>(H);
#pragma omp parallel
    {
        fft::Workspace2d<T> ws;
#pragma omp for schedule(static)
        for (int c = 0; c < s.channels; ++c) {
            fft::irfft2_channel(s.chan(c), out.chan(c), H, W, row_plan, col_plan, ws);
        }
    }
}

template <typename T>
Field<T> inverse_rfft2(const HalfSpectrum<T>& s, int H, int W) {
    Field<T> out;
    inverse_rfft2_into(s, H, W, out);
    return out;
}

/// Adjoint of inverse_rfft2 as a linear map over the stored real/imag parts:
/// grad wrt the half spectrum given the gradient of the real output.
template <typename T>
void inverse_rfft2_adjoint_into(const Field<T>& grad_out, HalfSpectrum<T>& g) {
    forward_rfft2_into(grad_out, g);
    const T inv_n = static_cast<T>(1) /
                    (static_cast<T>(grad_out.height) * static_cast<T>(grad_out.width));
    const T two_inv_n = T(2) * inv_n;
    const int wh = g.half_width();
    const bool even_w = g.width % 2 == 0;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < g.channels; ++c) {
        std::complex<T>* p = g.chan(c);
        for (int i = 0; i < g.height; ++i) {
            std::complex<T>* row = p + static_cast<size_t>(i) * wh;
            row[0] *= inv_n;
            for (int m = 1; m < wh - 1; ++m) row[m] *= two_inv_n;
            if (wh > 1) row[wh - 1] *= even_w ? inv_n : two_inv_n;
        }
    }
}

template <typename T>
HalfSpectrum<T> inverse_rfft2_adjoint(const Field<T>& grad_out) {
    HalfSpectrum<T> g;
    inverse_rfft2_adjoint_into(grad_out, g);
    return g;
}

/// Adjoint of forward_rfft2: grad wrt the real input given the gradient of the
/// stored half-spectrum coefficients. scratch is clobbered.
template <typename T>
void forward_rfft2_adjoint_into(const HalfSpectrum<T>& grad_spec, Field<T>& out,
                                HalfSpectrum<T>& scratch) {
    ensure_spec(scratch, grad_spec.channels, grad_spec.height, grad_spec.width);
    const int wh = grad_spec.half_width();
    const bool even_w = grad_spec.width % 2 == 0;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < grad_spec.channels; ++c) {
        const std::complex<T>* src = grad_spec.chan(c);
        std::complex<T>* dst = scratch.chan(c);
        for (int i = 0; i < grad_spec.height; ++i) {
            const size_t base = static_cast<size_t>(i) * wh;
            dst[base] = src[base];
            for (int m = 1; m < wh - 1; ++m) dst[base + m] = src[base + m] * T(0.5);
            if (wh > 1) {
                dst[base + wh - 1] =
                    even_w ? src[base + wh - 1] : src[base + wh - 1] * T(0.5);
            }
        }
    }
    inverse_rfft2_into(scratch, scratch.height, scratch.width, out);
    const T n = static_cast<T>(scratch.height) * static_cast<T>(scratch.width);
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= n;
}

template <typename T>
Field<T> forward_rfft2_adjoint(const HalfSpectrum<T>& grad_spec) {
    Field<T> out;
    HalfSpectrum<T> scratch;
    forward_rfft2_adjoint_into(grad_spec, out, scratch);
    return out;
}

/// Mirror a half spectrum to the full (H, W) complex spectrum.
template <typename T>
std::vector<std::complex<T>> mirror_full_spectrum(const HalfSpectrum<T>& s, int channel) {
    const int H = s.height, W = s.width, wh = s.half_width();
    std::vector<std::complex<T>> full(static_cast<size_t>(H) * W);
    const std::complex<T>* p = s.chan(channel);
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            if (j < wh) {
                full[static_cast<size_t>(i) * W + j] = p[static_cast<size_t>(i) * wh + j];
            } else {
                int mi = (H - i) % H;
                int mj = W - j;
                full[static_cast<size_t>(i) * W + j] =
                    std::conj(p[static_cast<size_t>(mi) * wh + mj]);
            }
        }
    }
    return full;
}

}  // namespace specb
