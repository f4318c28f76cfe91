#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "specb/field.hpp"
#include "specb/rng.hpp"

namespace specb {

/// Activator/inhibitor trajectory of the FitzHugh-Nagumo diffusion-reaction
/// system on (-1, 1)^2 with no-flux boundaries. Channel 0 is the activator u,
/// channel 1 the inhibitor v.
struct DiffReactSequence {
    std::vector<Field<double>> frames;  // (2, N, N) each
    double d_u = 1e-3;
    double d_v = 5e-3;
    double kappa = 5e-3;
};

struct DiffReactParams {
    int n = 64;
    double d_u = 1e-3;
    double d_v = 5e-3;
    double kappa = 5e-3;
    double dt = 1e-2;
    double record_dt = 0.05;
    int frames = 11;
    double burn_in = 0.5;  // early high-frequency transient excluded from the record
    double noise_amp = 1.0;
    double blowup_guard = 1e3;
    double cg_tol = 1e-10;

    void validate() const {
        if (n < 8 || n % 2 != 0) throw std::invalid_argument("diffusion_reaction: need even N >= 8");
        if (!(dt > 0.0)) throw std::invalid_argument("diffusion_reaction: dt must be > 0");
        if (frames < 2) throw std::invalid_argument("diffusion_reaction: need >= 2 frames");
    }
};

namespace dr_detail {

/// 5-point Neumann Laplacian (mirrored ghost nodes), grid spacing h = 2/(N-1).
inline void laplacian(const std::vector<double>& x, std::vector<double>& out, int N,
                      double inv_h2) {
    auto idx = [N](int i, int j) { return static_cast<size_t>(i) * N + j; };
    auto ref = [N](int i) { return i < 0 ? 1 : (i >= N ? N - 2 : i); };
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double c = x[idx(i, j)];
            out[idx(i, j)] = inv_h2 * (x[idx(ref(i - 1), j)] + x[idx(ref(i + 1), j)] +
                                       x[idx(i, ref(j - 1))] + x[idx(i, ref(j + 1))] - 4.0 * c);
        }
    }
}

/// CG solve of (I - gamma Lap) x = b; the operator is SPD and well
/// conditioned for the small gamma used here.
inline void helmholtz_solve(std::vector<double>& x, const std::vector<double>& b, int N,
                            double gamma, double inv_h2, double tol) {
    if (gamma == 0.0) {
        x = b;
        return;
    }
    const size_t sz = b.size();
    std::vector<double> r(sz), p(sz), ap(sz), lap(sz);
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        laplacian(v, lap, N, inv_h2);
        for (size_t t = 0; t < sz; ++t) out[t] = v[t] - gamma * lap[t];
    };
    // warm start from b
    x = b;
    apply(x, ap);
    double b_norm2 = 0.0;
    for (size_t t = 0; t < sz; ++t) {
        r[t] = b[t] - ap[t];
        b_norm2 += b[t] * b[t];
    }
    p = r;
    double rr = 0.0;
    for (double v : r) rr += v * v;
    const double stop = tol * tol * std::max(b_norm2, 1e-300);
    int iter = 0;
    while (rr > stop) {
        if (iter++ > 10000) {
            throw std::runtime_error("diffusion_reaction: Helmholtz CG failed to converge");
        }
        apply(p, ap);
        double pap = 0.0;
        for (size_t t = 0; t < sz; ++t) pap += p[t] * ap[t];
        const double alpha = rr / pap;
        for (size_t t = 0; t < sz; ++t) {
            x[t] += alpha * p[t];
            r[t] -= alpha * ap[t];
        }
        double rr_new = 0.0;
        for (double v : r) rr_new += v * v;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (size_t t = 0; t < sz; ++t) p[t] = r[t] + beta * p[t];
    }
}

struct State {
    std::vector<double> u, v;
};

/// One IMEX step: trapezoidal (Crank-Nicolson) diffusion with a Heun
/// predictor-corrector on the reactions. With zero diffusivities this reduces
/// exactly to Heun's method on the reaction ODEs.
inline void imex_step(State& s, int N, const DiffReactParams& prm, double inv_h2,
                      std::vector<double>& lap_u, std::vector<double>& lap_v,
                      State& stage, std::vector<double>& rhs) {
    const size_t sz = s.u.size();
    const double dt = prm.dt;
    auto r_u = [&](double u, double v) { return u - u * u * u - prm.kappa - v; };
    auto r_v = [&](double u, double v) { return u - v; };

    laplacian(s.u, lap_u, N, inv_h2);
    laplacian(s.v, lap_v, N, inv_h2);

    // predictor
    for (size_t t = 0; t < sz; ++t) {
        rhs[t] = s.u[t] + 0.5 * dt * prm.d_u * lap_u[t] + dt * r_u(s.u[t], s.v[t]);
    }
    helmholtz_solve(stage.u, rhs, N, 0.5 * dt * prm.d_u, inv_h2, prm.cg_tol);
    for (size_t t = 0; t < sz; ++t) {
        rhs[t] = s.v[t] + 0.5 * dt * prm.d_v * lap_v[t] + dt * r_v(s.u[t], s.v[t]);
    }
    helmholtz_solve(stage.v, rhs, N, 0.5 * dt * prm.d_v, inv_h2, prm.cg_tol);

    // corrector
    for (size_t t = 0; t < sz; ++t) {
        rhs[t] = s.u[t] + 0.5 * dt * prm.d_u * lap_u[t] +
                 0.5 * dt * (r_u(s.u[t], s.v[t]) + r_u(stage.u[t], stage.v[t]));
    }
    std::vector<double> new_u(sz);
    helmholtz_solve(new_u, rhs, N, 0.5 * dt * prm.d_u, inv_h2, prm.cg_tol);
    for (size_t t = 0; t < sz; ++t) {
        rhs[t] = s.v[t] + 0.5 * dt * prm.d_v * lap_v[t] +
                 0.5 * dt * (r_v(s.u[t], s.v[t]) + r_v(stage.u[t], stage.v[t]));
    }
    helmholtz_solve(s.v, rhs, N, 0.5 * dt * prm.d_v, inv_h2, prm.cg_tol);
    s.u = std::move(new_u);
}

}  // namespace dr_detail

/// Integrate from the given initial state, recording prm.frames frames every
/// record_dt after the burn-in.
inline DiffReactSequence solve_diffusion_reaction(const Field<double>& initial,
                                                  const DiffReactParams& prm) {
    prm.validate();
    const int N = prm.n;
    initial.require_shape(2, N, N, "diffusion_reaction initial state");
    const double h = 2.0 / (N - 1);
    const double inv_h2 = 1.0 / (h * h);
    const size_t sz = static_cast<size_t>(N) * N;

    dr_detail::State s;
    s.u.assign(initial.chan(0), initial.chan(0) + sz);
    s.v.assign(initial.chan(1), initial.chan(1) + sz);
    dr_detail::State stage;
    stage.u.resize(sz);
    stage.v.resize(sz);
    std::vector<double> lap_u(sz), lap_v(sz), rhs(sz);

    const int burn_steps = static_cast<int>(std::round(prm.burn_in / prm.dt));
    const int rec_steps = static_cast<int>(std::round(prm.record_dt / prm.dt));
    if (rec_steps < 1) throw std::invalid_argument("diffusion_reaction: record_dt < dt");

    DiffReactSequence seq;
    seq.d_u = prm.d_u;
    seq.d_v = prm.d_v;
    seq.kappa = prm.kappa;

    auto check_and_record = [&]() {
        Field<double> frame(2, N, N);
        for (size_t t = 0; t < sz; ++t) {
            // negated form so NaN also trips the guard
            if (!(std::abs(s.u[t]) <= prm.blowup_guard) ||
                !(std::abs(s.v[t]) <= prm.blowup_guard)) {
                throw std::runtime_error("diffusion_reaction: blow-up detected (|value| > " +
                                         std::to_string(prm.blowup_guard) + ")");
            }
            frame.chan(0)[t] = s.u[t];
            frame.chan(1)[t] = s.v[t];
        }
        seq.frames.push_back(std::move(frame));
    };

    for (int t = 0; t < burn_steps; ++t) {
        dr_detail::imex_step(s, N, prm, inv_h2, lap_u, lap_v, stage, rhs);
    }
    check_and_record();
    for (int f = 1; f < prm.frames; ++f) {
        for (int t = 0; t < rec_steps; ++t) {
            dr_detail::imex_step(s, N, prm, inv_h2, lap_u, lap_v, stage, rhs);
        }
        check_and_record();
    }
    return seq;
}

/// Generate sequences from white-noise initial conditions.
inline std::vector<DiffReactSequence> generate_diffusion_reaction(int n_sequences, int N,
                                                                  uint64_t seed,
                                                                  DiffReactParams prm = {}) {
    prm.n = N;
    prm.validate();
    std::vector<DiffReactSequence> out(n_sequences);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n_sequences; ++s) {
        Rng rng(derive_seed(seed, s));
        Field<double> init(2, N, N);
        for (auto& v : init.data) v = prm.noise_amp * rng.normal();
        out[s] = solve_diffusion_reaction(init, prm);
    }
    return out;
}

}  // namespace specb
