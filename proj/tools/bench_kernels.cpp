// Timing comparison of the OpenMP kernels against their serial reference
// implementations on training-sized problems.

#include <chrono>
#include <complex>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "specb/fft.hpp"
#include "specb/kernels.hpp"
#include "specb/kernels_serial.hpp"
#include "specb/rng.hpp"

using namespace specb;
using clk = std::chrono::high_resolution_clock;

namespace {

std::vector<float> random_vec(size_t n, uint64_t seed) {
    Rng rng(seed);
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.normal());
    return v;
}

template <typename F>
double time_ms(int reps, F&& fn) {
    fn();  // warm up
    auto t0 = clk::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = clk::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    const int C = 32, H = 64, W = 64, k = 16;
    const size_t P = static_cast<size_t>(H) * W;
    const int wh = W / 2 + 1;
    const size_t plane = static_cast<size_t>(H) * wh;
    const int reps = 50;

    printf("threads: %d\n", omp_get_max_threads());
    printf("%-28s %10s %10s %8s\n", "kernel", "omp (ms)", "serial", "speedup");

    {
        auto x = random_vec(C * P, 1);
        auto w = random_vec(static_cast<size_t>(C) * C, 2);
        auto b = random_vec(C, 3);
        std::vector<float> y(C * P);
        double t_omp = time_ms(reps, [&] {
            kernels::pixelwise_linear(x.data(), y.data(), w.data(), b.data(), C, C, P);
        });
        double t_ser = time_ms(reps, [&] {
            kernels::serial::pixelwise_linear(x.data(), y.data(), w.data(), b.data(), C, C, P);
        });
        printf("%-28s %10.3f %10.3f %7.2fx\n", "pixelwise_linear 32x64x64", t_omp, t_ser,
               t_ser / t_omp);
    }
    {
        auto g = random_vec(C * P, 4);
        auto x = random_vec(C * P, 5);
        std::vector<float> dw(static_cast<size_t>(C) * C, 0.0f), db(C, 0.0f);
        double t_omp = time_ms(reps, [&] {
            kernels::pixelwise_linear_back_params(g.data(), x.data(), dw.data(), db.data(), C, C,
                                                  P);
        });
        double t_ser = time_ms(reps, [&] {
            kernels::serial::pixelwise_linear_back_params(g.data(), x.data(), dw.data(),
                                                          db.data(), C, C, P);
        });
        printf("%-28s %10.3f %10.3f %7.2fx\n", "linear_back_params", t_omp, t_ser, t_ser / t_omp);
    }
    {
        Rng rng(7);
        std::vector<std::complex<float>> xs(C * plane), ys(C * plane);
        for (auto& z : xs) z = {static_cast<float>(rng.normal()), static_cast<float>(rng.normal())};
        auto w = random_vec(2ull * 2 * k * k * C * C, 8);
        double t_omp = time_ms(reps, [&] {
            kernels::spectral_apply(xs.data(), ys.data(), w.data(), C, C, H, wh, k);
        });
        double t_ser = time_ms(reps, [&] {
            kernels::serial::spectral_apply(xs.data(), ys.data(), w.data(), C, C, H, wh, k);
        });
        printf("%-28s %10.3f %10.3f %7.2fx\n", "spectral_apply k=16", t_omp, t_ser, t_ser / t_omp);
    }
    {
        Field<float> f(C, H, W);
        Rng rng(9);
        for (auto& v : f.data) v = static_cast<float>(rng.normal());
        double t_omp = time_ms(reps, [&] { auto s = forward_rfft2(f); });
        double t_ser;
        {
            const auto& row_plan = fft::get_plan<float>(W);
            const auto& col_plan = fft::get_plan<float>(H);
            HalfSpectrum<float> out(C, H, W);
            t_ser = time_ms(reps, [&] {
                fft::Workspace2d<float> ws;
                for (int c = 0; c < C; ++c) {
                    fft::rfft2_channel(f.chan(c), out.chan(c), H, W, row_plan, col_plan, ws);
                }
            });
        }
        printf("%-28s %10.3f %10.3f %7.2fx\n", "rfft2 32ch 64x64", t_omp, t_ser, t_ser / t_omp);
    }
    {
        auto p = random_vec(1u << 20, 10);
        auto g = random_vec(1u << 20, 11);
        std::vector<float> m(1u << 20, 0.0f), v(1u << 20, 0.0f);
        long step = 0;
        double t_omp = time_ms(reps, [&] {
            kernels::adam_step(p.data(), g.data(), m.data(), v.data(), p.size(), 1e-3f, 0.9f,
                               0.999f, 1e-8f, 1e-4f, ++step);
        });
        double t_ser = time_ms(reps, [&] {
            kernels::serial::adam_step(p.data(), g.data(), m.data(), v.data(), p.size(), 1e-3f,
                                       0.9f, 0.999f, 1e-8f, 1e-4f, ++step);
        });
        printf("%-28s %10.3f %10.3f %7.2fx\n", "adam_step 1M params", t_omp, t_ser, t_ser / t_omp);
    }
    return 0;
}
