#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "locstat/stability.hpp"

namespace locstat {

/// Time-varying PACF surface: rho_j(t) for j = 1..b0 on a uniform time grid.
/// rho_j is the last-lag coefficient function of the order-j sieve fit.
struct PacfSurface {
    int b0 = 0;
    Vector grid;          // t_1..t_G
    Matrix values;        // b0 x G, row j-1 holds rho_j(t_g)
    std::vector<bool> skipped;  // per-lag ill-conditioning flag
    double cap = 5.0;
    bool cap_exceeded = false;
};

inline PacfSurface pacf_surface(const TimeSeries& ts, int b0, const Basis& basis,
                                int grid_points = 101, double cap = 5.0,
                                int threads = 1) {
    if (b0 < 1) throw config_error("pacf_surface: b0 must be >= 1");
    PacfSurface s;
    s.b0 = b0;
    s.cap = cap;
    s.grid.resize(grid_points);
    for (int g = 0; g < grid_points; ++g)
        s.grid(g) = static_cast<double>(g) / (grid_points - 1);
    s.values = Matrix::Zero(b0, grid_points);
    s.skipped.assign(static_cast<size_t>(b0), false);

    parallel_for(b0, threads, [&](int idx) {
        const int j = idx + 1;
        try {
            SieveFit f = fit(ts, j, basis, 1);
            for (int g = 0; g < grid_points; ++g)
                s.values(idx, g) = f.eval_coeff(j, s.grid(g));
        } catch (const std::exception&) {
            s.skipped[static_cast<size_t>(idx)] = true;
            s.values.row(idx).setZero();
        }
    });
    for (int idx = 0; idx < b0; ++idx)
        if (!s.skipped[static_cast<size_t>(idx)] &&
            s.values.row(idx).cwiseAbs().maxCoeff() > cap)
            s.cap_exceeded = true;
    return s;
}

/// T_phi = sum_{j=b1}^{b0} integral phi_j(t)^2 dt over the order-b0 fit.
inline double pacf_zero_stat(const SieveFit& fit_b0, int b1) {
    const int b0 = fit_b0.b();
    if (b1 < 1 || b1 > b0)
        throw config_error("pacf_zero_stat: need 1 <= b1 <= b0");
    const Matrix& grid = fit_b0.basis().quad_table();
    const int c = fit_b0.c();
    double total = 0.0;
    for (int j = b1; j <= b0; ++j) {
        const Vector vals = grid * fit_b0.beta().segment(j * c, c);
        total += Basis::integrate(vals.array().square().matrix());
    }
    return total;
}

inline double pacf_zero_stat(const TimeSeries& ts, int b0, int b1, const Basis& basis) {
    SieveFit f = fit(ts, b0, basis, 1);
    return pacf_zero_stat(f, b1);
}

/// Multiplier-bootstrap test of H0: rho_j(.) == 0 for j = b1..b0. Same
/// machinery as the stability test with the centering replaced by the
/// projection onto the trailing (b0-b1+1) lag blocks.
inline StabilityTestResult pacf_zero_test(const TimeSeries& ts, int b0, int b1,
                                          const Basis& basis, int m, int B,
                                          double alpha, std::uint64_t seed = 0,
                                          int threads = 1) {
    if (B < 100) throw config_error("pacf_zero_test: B must be >= 100");
    if (b1 < 1 || b1 > b0) throw config_error("pacf_zero_test: need 1 <= b1 <= b0");
    SieveFit f = fit(ts, b0, basis, 1);
    const double observed = ts.n() * pacf_zero_stat(f, b1);

    const int c = basis.size();
    const int p = (b0 + 1) * c;
    const int tail = (b0 - b1 + 1) * c;
    Matrix proj = Matrix::Zero(p, p);
    proj.block(p - tail, p - tail, tail, tail).setIdentity();
    Matrix gamma = detail::sandwich_gamma(f.sigma_hat(), proj);

    BootstrapContext ctx(f, ts, m, std::move(gamma));
    std::vector<double> reps = detail::draw_replicates(ctx, B, seed, threads);

    StabilityTestResult out;
    out.variant = StatVariant::lags_only;
    out.b = b0;
    out.c = c;
    out.m = m;
    out.seed = seed;
    detail::decide(out, observed, std::move(reps), alpha);
    return out;
}

} // namespace locstat
