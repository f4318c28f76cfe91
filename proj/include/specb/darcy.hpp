#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "specb/field.hpp"
#include "specb/grf.hpp"
#include "specb/rng.hpp"

namespace specb {

/// Steady-state Darcy flow sample: piecewise-constant diffusion coefficient a
/// and the solution u of -div(a grad u) = f on the unit square with u = 0 on
/// the boundary. Fields are N x N node grids including the boundary nodes,
/// h = 1/(N-1).
struct DarcySample {
    Field<double> a;
    Field<double> u;
};

struct DarcyParams {
    double grf_alpha = 2.0;
    double grf_tau = 3.0;
    double coeff_high = 12.0;
    double coeff_low = 3.0;
    double cg_tol = 1e-8;
    int cg_max_iter = 200000;
};

namespace darcy_detail {

/// Matrix-vector product of the 5-point flux-form operator on interior nodes.
/// Face coefficients are arithmetic means of the node coefficients; boundary
/// values of u are zero.
inline void apply_operator(const Field<double>& a, const std::vector<double>& u,
                           std::vector<double>& out, int N) {
    const int M = N - 2;  // interior nodes per side
    const double inv_h2 = static_cast<double>(N - 1) * (N - 1);
#pragma omp parallel for schedule(static)
    for (int ii = 0; ii < M; ++ii) {
        const int i = ii + 1;
        for (int jj = 0; jj < M; ++jj) {
            const int j = jj + 1;
            const double ac = a.at(0, i, j);
            const double aE = 0.5 * (ac + a.at(0, i, j + 1));
            const double aW = 0.5 * (ac + a.at(0, i, j - 1));
            const double aN = 0.5 * (ac + a.at(0, i + 1, j));
            const double aS = 0.5 * (ac + a.at(0, i - 1, j));
            const double uc = u[static_cast<size_t>(ii) * M + jj];
            const double uE = (jj + 1 < M) ? u[static_cast<size_t>(ii) * M + jj + 1] : 0.0;
            const double uW = (jj > 0) ? u[static_cast<size_t>(ii) * M + jj - 1] : 0.0;
            const double uN = (ii + 1 < M) ? u[static_cast<size_t>(ii + 1) * M + jj] : 0.0;
            const double uS = (ii > 0) ? u[static_cast<size_t>(ii - 1) * M + jj] : 0.0;
            out[static_cast<size_t>(ii) * M + jj] =
                inv_h2 * (aE * (uc - uE) + aW * (uc - uW) + aN * (uc - uN) + aS * (uc - uS));
        }
    }
}

}  // namespace darcy_detail

/// Solve -div(a grad u) = f with homogeneous Dirichlet data by Jacobi-
/// preconditioned conjugate gradients. f is given on the full node grid; its
/// boundary values are ignored. Throws with the residual norm if CG fails to
/// reach the relative tolerance.
inline Field<double> darcy_solve(const Field<double>& a, const Field<double>& f,
                                 const DarcyParams& prm = {}) {
    const int N = a.height;
    if (a.width != N || f.height != N || f.width != N) {
        throw std::invalid_argument("darcy_solve: fields must share a square N x N grid");
    }
    const int M = N - 2;
    const size_t n_unknowns = static_cast<size_t>(M) * M;
    const double inv_h2 = static_cast<double>(N - 1) * (N - 1);

    std::vector<double> b(n_unknowns);
    for (int ii = 0; ii < M; ++ii) {
        for (int jj = 0; jj < M; ++jj) {
            b[static_cast<size_t>(ii) * M + jj] = f.at(0, ii + 1, jj + 1);
        }
    }
    std::vector<double> diag(n_unknowns);
    for (int ii = 0; ii < M; ++ii) {
        for (int jj = 0; jj < M; ++jj) {
            const int i = ii + 1, j = jj + 1;
            const double ac = a.at(0, i, j);
            diag[static_cast<size_t>(ii) * M + jj] =
                inv_h2 * 0.5 *
                (4.0 * ac + a.at(0, i, j + 1) + a.at(0, i, j - 1) + a.at(0, i + 1, j) +
                 a.at(0, i - 1, j));
        }
    }

    std::vector<double> u(n_unknowns, 0.0), r = b, z(n_unknowns), p(n_unknowns), ap(n_unknowns);
    auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
        double acc = 0.0;
        for (size_t t = 0; t < x.size(); ++t) acc += x[t] * y[t];
        return acc;
    };
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        Field<double> out(1, N, N, 0.0);
        return out;
    }
    for (size_t t = 0; t < n_unknowns; ++t) z[t] = r[t] / diag[t];
    p = z;
    double rz = dot(r, z);
    double r_norm = std::sqrt(dot(r, r));
    int iter = 0;
    while (r_norm > prm.cg_tol * b_norm) {
        if (iter++ >= prm.cg_max_iter) {
            throw std::runtime_error("darcy_solve: CG failed to converge, residual norm " +
                                     std::to_string(r_norm / b_norm));
        }
        darcy_detail::apply_operator(a, p, ap, N);
        const double alpha = rz / dot(p, ap);
        for (size_t t = 0; t < n_unknowns; ++t) {
            u[t] += alpha * p[t];
            r[t] -= alpha * ap[t];
        }
        for (size_t t = 0; t < n_unknowns; ++t) z[t] = r[t] / diag[t];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t t = 0; t < n_unknowns; ++t) p[t] = z[t] + beta * p[t];
        r_norm = std::sqrt(dot(r, r));
    }

    Field<double> out(1, N, N, 0.0);  // boundary stays exactly zero
    for (int ii = 0; ii < M; ++ii) {
        for (int jj = 0; jj < M; ++jj) {
            out.at(0, ii + 1, jj + 1) = u[static_cast<size_t>(ii) * M + jj];
        }
    }
    return out;
}

/// Threshold a GRF draw into the two-valued diffusion coefficient.
inline Field<double> darcy_coefficient(int N, uint64_t seed, const DarcyParams& prm = {}) {
    GrfSpec g;
    g.n = N;
    g.tau = prm.grf_tau;
    g.alpha = prm.grf_alpha;
    g.sigma = 1.0;
    g.seed = seed;
    Field<double> psi = sample_grf(g);
    Field<double> a(1, N, N);
    for (size_t t = 0; t < a.data.size(); ++t) {
        a.data[t] = psi.data[t] >= 0.0 ? prm.coeff_high : prm.coeff_low;
    }
    return a;
}

/// Generate Darcy samples with f = 1. Per-sample seeds are counter-derived so
/// any generation order (or parallel fan-out) yields identical data.
inline std::vector<DarcySample> generate_darcy(int n_samples, int N, uint64_t seed,
                                               const DarcyParams& prm = {}) {
    if (N < 16 || N % 2 != 0) {
        throw std::invalid_argument("generate_darcy: need even N >= 16");
    }
    std::vector<DarcySample> out(n_samples);
    Field<double> f(1, N, N, 1.0);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n_samples; ++s) {
        Field<double> a = darcy_coefficient(N, derive_seed(seed, s), prm);
        out[s] = DarcySample{a, darcy_solve(a, f, prm)};
    }
    return out;
}

}  // namespace specb
