#pragma once

#include <cmath>
#include <cstdint>

#include "specb/fft.hpp"
#include "specb/field.hpp"
#include "specb/rng.hpp"

namespace specb {

/// Gaussian random field on the periodic unit square with covariance
/// sigma^2 (-Laplacian + tau^2 I)^(-alpha), sampled spectrally: Fourier mode m
/// carries variance 2 sigma^2 (4 pi^2 |m|^2 + tau^2)^(-alpha), independent of
/// the grid size. The DC mode is zeroed so every sample has exactly zero
/// spatial mean.
struct GrfSpec {
    int n = 64;
    double tau = 3.0;
    double alpha = 2.0;
    double sigma = 1.0;
    uint64_t seed = 0;

    void validate() const {
        if (n < 2) throw std::invalid_argument("grf: grid size must be >= 2");
        if (!(tau > 0.0)) throw std::invalid_argument("grf: tau must be > 0");
        if (!(alpha > 1.0)) throw std::invalid_argument("grf: alpha must be > 1");
    }
};

inline Field<double> sample_grf(const GrfSpec& spec) {
    spec.validate();
    const int n = spec.n;
    Field<double> noise(1, n, n);
    Rng rng(spec.seed);
    for (auto& v : noise.data) v = rng.normal();

    HalfSpectrum<double> g = forward_rfft2(noise);
    const double four_pi2 = 4.0 * fft::kPi * fft::kPi;
    // the white-noise spectrum carries E|G|^2 = n^2; sqrt(2) n sigma lambda^(-a/2)
    // then yields the grid-independent modal variance above
    const double amp = std::sqrt(2.0) * n * spec.sigma;
    const int wh = g.half_width();
    for (int m1 = 0; m1 < n; ++m1) {
        const int f1 = m1 >= (n + 1) / 2 ? m1 - n : m1;
        for (int m2 = 0; m2 < wh; ++m2) {
            double lam = four_pi2 * (static_cast<double>(f1) * f1 + static_cast<double>(m2) * m2) +
                         spec.tau * spec.tau;
            double scale = amp * std::pow(lam, -spec.alpha / 2.0);
            if (m1 == 0 && m2 == 0) scale = 0.0;
            g.at(0, m1, m2) *= scale;
        }
    }
    return inverse_rfft2(g, n, n);
}

}  // namespace specb
