#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "specb/fft.hpp"
#include "specb/field.hpp"
#include "specb/grf.hpp"
#include "specb/rng.hpp"

namespace specb {

/// Recorded vorticity trajectory of the 2D incompressible Navier-Stokes
/// equation on the periodic unit torus.
struct NsSequence {
    std::vector<Field<double>> frames;  // (1, N, N) each, frames[0] = w0
    double nu = 1e-3;
    double dt_record = 1.0;
};

struct NsParams {
    int n = 64;
    double nu = 1e-3;
    double t_final = 19.0;
    double record_dt = 1.0;
    double forcing_amp = 0.1;
    double cfl = 0.5;
    double grf_alpha = 2.5;
    double grf_tau = 7.0;
    double grf_sigma = 18.520259177452136;  // tau^1.5
    double dt_max = 1e-2;

    void validate() const {
        if (n < 8 || n % 2 != 0) throw std::invalid_argument("ns: need even N >= 8");
        if (!(nu > 0.0)) throw std::invalid_argument("ns: viscosity must be > 0");
        if (!(record_dt > 0.0) || !(t_final > 0.0)) {
            throw std::invalid_argument("ns: time parameters must be > 0");
        }
    }
};

namespace ns_detail {

struct SpectralGrid {
    int n = 0;
    int wh = 0;
    std::vector<double> k1, k2;   // wavenumbers (2 pi m) per half-spectrum entry
    std::vector<double> ksq;      // |k|^2
    std::vector<double> inv_ksq;  // 1/|k|^2, zero at the mean mode
    std::vector<char> dealias;    // 2/3-rule mask

    explicit SpectralGrid(int n_) : n(n_), wh(n_ / 2 + 1) {
        const size_t sz = static_cast<size_t>(n) * wh;
        k1.resize(sz);
        k2.resize(sz);
        ksq.resize(sz);
        inv_ksq.resize(sz);
        dealias.resize(sz);
        const double two_pi = 2.0 * fft::kPi;
        const int cutoff = n / 3;
        for (int m1 = 0; m1 < n; ++m1) {
            const int f1 = m1 >= (n + 1) / 2 ? m1 - n : m1;
            for (int m2 = 0; m2 < wh; ++m2) {
                const size_t t = static_cast<size_t>(m1) * wh + m2;
                k1[t] = two_pi * f1;
                k2[t] = two_pi * m2;
                ksq[t] = k1[t] * k1[t] + k2[t] * k2[t];
                inv_ksq[t] = ksq[t] > 0.0 ? 1.0 / ksq[t] : 0.0;
                dealias[t] = (std::abs(f1) <= cutoff && m2 <= cutoff) ? 1 : 0;
            }
        }
    }
};

/// Dealiased spectral nonlinear term N(w) = u . grad w, plus max |u| for the
/// CFL check. Velocity comes from the stream function: u = (psi_y, -psi_x),
/// Lap psi = -w.
inline void nonlinear_term(const HalfSpectrum<double>& w_hat, const SpectralGrid& g,
                           HalfSpectrum<double>& out, double& max_vel) {
    const int n = g.n, wh = g.wh;
    HalfSpectrum<double> u1(1, n, n), u2(1, n, n), wx(1, n, n), wy(1, n, n);
    for (size_t t = 0; t < w_hat.data.size(); ++t) {
        const std::complex<double> wv = w_hat.data[t];
        const std::complex<double> psi = wv * g.inv_ksq[t];
        const std::complex<double> i_unit(0.0, 1.0);
        u1.data[t] = i_unit * g.k2[t] * psi;
        u2.data[t] = -i_unit * g.k1[t] * psi;
        wx.data[t] = i_unit * g.k1[t] * wv;
        wy.data[t] = i_unit * g.k2[t] * wv;
    }
    Field<double> u1r = inverse_rfft2(u1, n, n);
    Field<double> u2r = inverse_rfft2(u2, n, n);
    Field<double> wxr = inverse_rfft2(wx, n, n);
    Field<double> wyr = inverse_rfft2(wy, n, n);
    Field<double> adv(1, n, n);
    double mv = 0.0;
    for (size_t t = 0; t < adv.data.size(); ++t) {
        adv.data[t] = u1r.data[t] * wxr.data[t] + u2r.data[t] * wyr.data[t];
        mv = std::max(mv, std::max(std::abs(u1r.data[t]), std::abs(u2r.data[t])));
    }
    max_vel = mv;
    out = forward_rfft2(adv);
    for (size_t t = 0; t < out.data.size(); ++t) {
        if (!g.dealias[t]) out.data[t] = std::complex<double>(0.0, 0.0);
    }
    (void)wh;
}

}  // namespace ns_detail

/// Integrate the vorticity equation from w0 with static forcing f. Implicit
/// Crank-Nicolson viscosity, explicit Heun advection, 2/3-rule dealiasing.
/// Records the state every record_dt starting with w0 itself.
inline NsSequence solve_ns(const Field<double>& w0, const Field<double>& forcing,
                           const NsParams& prm) {
    prm.validate();
    const int n = prm.n;
    w0.require_shape(1, n, n, "solve_ns initial vorticity");
    ns_detail::SpectralGrid grid(n);
    const double h = 1.0 / n;

    HalfSpectrum<double> w_hat = forward_rfft2(w0);
    HalfSpectrum<double> f_hat = forward_rfft2(forcing);

    NsSequence seq;
    seq.nu = prm.nu;
    seq.dt_record = prm.record_dt;
    seq.frames.push_back(w0);

    const int n_records = static_cast<int>(std::round(prm.t_final / prm.record_dt));
    HalfSpectrum<double> nl(1, n, n), nl2(1, n, n), w_star(1, n, n);
    for (int rec = 0; rec < n_records; ++rec) {
        // pick the interval's step from the advective CFL at its start
        double max_vel = 0.0;
        ns_detail::nonlinear_term(w_hat, grid, nl, max_vel);
        double dt_cfl = prm.cfl * h / std::max(max_vel, 1e-12);
        double dt_target = std::min({dt_cfl, prm.dt_max, prm.record_dt});
        const int substeps = static_cast<int>(std::ceil(prm.record_dt / dt_target - 1e-12));
        const double dt = prm.record_dt / substeps;

        for (int s = 0; s < substeps; ++s) {
            if (s > 0) ns_detail::nonlinear_term(w_hat, grid, nl, max_vel);
            if (max_vel * dt / h > 1.0) {
                throw std::runtime_error(
                    "ns: CFL violation (max|u| dt / h = " + std::to_string(max_vel * dt / h) +
                    "); re-run with a smaller dt_max or larger resolution");
            }
            for (size_t t = 0; t < w_hat.data.size(); ++t) {
                const double visc = 0.5 * prm.nu * grid.ksq[t] * dt;
                w_star.data[t] =
                    ((1.0 - visc) * w_hat.data[t] - dt * nl.data[t] + dt * f_hat.data[t]) /
                    (1.0 + visc);
            }
            double max_vel2 = 0.0;
            ns_detail::nonlinear_term(w_star, grid, nl2, max_vel2);
            for (size_t t = 0; t < w_hat.data.size(); ++t) {
                const double visc = 0.5 * prm.nu * grid.ksq[t] * dt;
                w_hat.data[t] = ((1.0 - visc) * w_hat.data[t] -
                                 0.5 * dt * (nl.data[t] + nl2.data[t]) + dt * f_hat.data[t]) /
                                (1.0 + visc);
            }
        }
        Field<double> frame = inverse_rfft2(w_hat, n, n);
        frame.validate_finite("ns frame");
        seq.frames.push_back(frame);
    }
    return seq;
}

/// Default static forcing 0.1 (sin(2 pi (x1 + x2)) + cos(2 pi (x1 + x2))),
/// zero spatial mean.
inline Field<double> ns_default_forcing(int n, double amp) {
    Field<double> f(1, n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = static_cast<double>(i) / n;
            const double y = static_cast<double>(j) / n;
            const double s = 2.0 * fft::kPi * (x + y);
            f.at(0, i, j) = amp * (std::sin(s) + std::cos(s));
        }
    }
    return f;
}

/// Generate vorticity sequences from GRF initial conditions.
inline std::vector<NsSequence> generate_ns(int n_sequences, const NsParams& prm, uint64_t seed) {
    prm.validate();
    Field<double> f = ns_default_forcing(prm.n, prm.forcing_amp);
    std::vector<NsSequence> out(n_sequences);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n_sequences; ++s) {
        GrfSpec g;
        g.n = prm.n;
        g.tau = prm.grf_tau;
        g.alpha = prm.grf_alpha;
        g.sigma = prm.grf_sigma;
        g.seed = derive_seed(seed, s);
        out[s] = solve_ns(sample_grf(g), f, prm);
    }
    return out;
}

}  // namespace specb
