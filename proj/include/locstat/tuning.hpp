#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "locstat/pacf.hpp"

namespace locstat {

struct ScoredCandidate {
    double candidate = 0.0;
    double score = std::numeric_limits<double>::quiet_NaN();
    bool feasible = true;
};

struct TuningReport {
    int b_hat = 0;
    int c_hat = 0;
    int m_hat = 0;
    std::vector<ScoredCandidate> cv_table;          // (c, CV(c))
    std::vector<ScoredCandidate> mv_table;          // (m, se(m)), interior only
    std::vector<ScoredCandidate> b_scan;            // (b1, p-value)
    std::vector<ScoredCandidate> forecast_grid;     // (encoded pair, validation MSE)
};

/// Largest b1 < b0 for which H0: rho_j == 0, j = b1..b0 is rejected;
/// falls back to 1 when nothing rejects.
inline int select_b(const TimeSeries& ts, int b0, const Basis& basis, int m, int B,
                    double alpha, std::uint64_t seed = 0, int threads = 1,
                    std::vector<ScoredCandidate>* scan = nullptr) {
    for (int b1 = b0 - 1; b1 >= 1; --b1) {
        StabilityTestResult r =
            pacf_zero_test(ts, b0, b1, basis, m, B, alpha, seed, threads);
        if (scan) scan->push_back({static_cast<double>(b1), r.p_value, true});
        if (r.reject) return b1;
    }
    return 1;
}

/// Cross-validated basis size: fit on x_{b+1}..x_{n-theta}, score one-step
/// squared errors over the held-out tail. Ties go to the smaller c.
inline int select_c_cv(const TimeSeries& ts, int b, BasisKind kind, int theta,
                       const std::vector<int>& candidates, BasisOptions options = {},
                       std::vector<ScoredCandidate>* table = nullptr) {
    const int n = ts.n();
    if (candidates.empty()) throw config_error("select_c_cv: empty candidate list");
    if (theta < 1 || theta >= n - b)
        throw config_error("select_c_cv: need 1 <= theta < n - b");
    int best_c = -1;
    double best_cv = std::numeric_limits<double>::infinity();
    for (int c : candidates) {
        ScoredCandidate entry{static_cast<double>(c), 0.0, true};
        try {
            Basis basis(kind, c, options);
            SieveFit f = fit(ts, b, basis, 1, n - theta);
            double sum = 0.0;
            for (int k = 1; k <= theta; ++k) {
                const double t = static_cast<double>(n - k) / n;
                double pred = f.eval_coeff(0, t);
                for (int j = 1; j <= b; ++j) pred += f.eval_coeff(j, t) * ts.at(n - k - j);
                const double e = ts.at(n - k) - pred;
                sum += e * e;
            }
            entry.score = sum / theta;
            if (entry.score < best_cv) {
                best_cv = entry.score;
                best_c = c;
            }
        } catch (const std::exception&) {
            entry.feasible = false;
        }
        if (table) table->push_back(entry);
    }
    if (best_c < 0) throw config_error("select_c_cv: no feasible candidate");
    return best_c;
}

/// Minimum-volatility window size: pick the interior ladder entry whose
/// windowed long-run covariance estimate is most stable across its
/// (2 h0 + 1)-neighborhood (Frobenius norm). Ties go to the smaller m.
inline int select_m_mv(const TimeSeries& ts, const SieveFit& fit, const std::vector<int>& ladder,
                       int h0 = 3, std::vector<ScoredCandidate>* table = nullptr) {
    const int len = static_cast<int>(ladder.size());
    if (len < 2 * h0 + 1)
        throw config_error("select_m_mv: ladder must have at least 2*h0+1 = " +
                           std::to_string(2 * h0 + 1) + " entries");
    for (int i = 1; i < len; ++i)
        if (ladder[static_cast<size_t>(i)] <= ladder[static_cast<size_t>(i - 1)])
            throw config_error("select_m_mv: ladder must be strictly increasing");

    std::vector<Matrix> omegas;
    omegas.reserve(static_cast<size_t>(len));
    for (int m : ladder) {
        BootstrapContext ctx(fit, ts, m, Matrix::Identity(1, 1));
        omegas.push_back(ctx.omega_hat());
    }

    int best_m = -1;
    double best_se = std::numeric_limits<double>::infinity();
    for (int j = h0; j < len - h0; ++j) {
        Matrix bar = Matrix::Zero(omegas[0].rows(), omegas[0].cols());
        for (int k = -h0; k <= h0; ++k) bar += omegas[static_cast<size_t>(j + k)];
        bar /= (2.0 * h0 + 1.0);
        double ss = 0.0;
        for (int k = -h0; k <= h0; ++k)
            ss += (bar - omegas[static_cast<size_t>(j + k)]).squaredNorm();
        const double se = std::sqrt(ss / (2.0 * h0));
        if (table) table->push_back({static_cast<double>(ladder[static_cast<size_t>(j)]), se, true});
        if (se < best_se) {
            best_se = se;
            best_m = ladder[static_cast<size_t>(j)];
        }
    }
    return best_m;
}

/// Forecast-validation selection of (b, c): fit each pair on x_1..x_{n-l},
/// one-step-forecast the last l points with the fitted coefficient functions
/// evaluated at the forecast times, keep the argmin of the validation MSE.
/// Ties go to smaller b, then smaller c.
inline std::pair<int, int> select_bc_forecast(const TimeSeries& ts,
                                              const std::vector<std::pair<int, int>>& grid,
                                              int l, BasisKind kind, BasisOptions options = {},
                                              std::vector<ScoredCandidate>* table = nullptr) {
    const int n = ts.n();
    if (grid.empty()) throw config_error("select_bc_forecast: empty grid");
    if (l < 1 || l >= n) throw config_error("select_bc_forecast: need 1 <= l < n");
    std::vector<std::pair<int, int>> ordered = grid;
    std::sort(ordered.begin(), ordered.end());
    int best_b = -1, best_c = -1;
    double best_mse = std::numeric_limits<double>::infinity();
    for (auto [b, c] : ordered) {
        ScoredCandidate entry{static_cast<double>(b * 1000 + c), 0.0, true};
        try {
            Basis basis(kind, c, options);
            SieveFit f = fit(ts, b, basis, 1, n - l);
            double sum = 0.0;
            for (int k = n - l + 1; k <= n; ++k) {
                const double t = static_cast<double>(k) / n;
                double pred = f.eval_coeff(0, t);
                for (int j = 1; j <= b; ++j) pred += f.eval_coeff(j, t) * ts.at(k - j);
                const double e = ts.at(k) - pred;
                sum += e * e;
            }
            entry.score = sum / l;
            if (entry.score < best_mse) {
                best_mse = entry.score;
                best_b = b;
                best_c = c;
            }
        } catch (const std::exception&) {
            entry.feasible = false;
        }
        if (table) table->push_back(entry);
    }
    if (best_b < 0) throw config_error("select_bc_forecast: no feasible pair");
    return {best_b, best_c};
}

struct AutoTuneOptions {
    BasisKind kind = BasisKind::Fourier;
    BasisOptions basis_options{};
    int b0 = 10;                 // largest PACF lag scanned for b
    int B_select = 300;          // bootstrap size inside select_b
    double alpha_select = 0.1;
    int h0 = 3;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<int> c_candidates; // empty -> defaults per basis kind
};

/// Default selection pipeline: c by cross-validation at a preliminary small
/// order, b by the PACF-zero scan, m by minimum volatility on the order-b fit.
inline TuningReport auto_tune(const TimeSeries& ts, AutoTuneOptions opts = {}) {
    const int n = ts.n();
    TuningReport rep;

    // c = 1 spans only constants, which makes the stability statistic and its
    // bootstrap identically zero, and c = 2 truncates the Fourier system inside
    // a frequency pair (no sine component at all); the test ladder starts at 3.
    std::vector<int> c_cands = opts.c_candidates;
    if (c_cands.empty()) {
        if (opts.kind == BasisKind::DaubechiesPeriodized)
            c_cands = {2, 4, 8};
        else
            c_cands = {3, 4, 5, 6};
    }
    const int theta = std::max(1, n / 10);
    const int b_pre = 2;
    rep.c_hat = select_c_cv(ts, b_pre, opts.kind, theta, c_cands, opts.basis_options,
                            &rep.cv_table);
    Basis basis(opts.kind, rep.c_hat, opts.basis_options);

    // Preliminary m ~ n^{1/3} for the order-selection bootstrap.
    const int m_pre = std::max(2, static_cast<int>(std::lround(std::cbrt(n))));

    int b0 = opts.b0;
    // Keep the order-b0 design comfortably overdetermined.
    while (b0 > 2 && n - b0 - 1 <= 2 * (b0 + 1) * rep.c_hat) --b0;
    rep.b_hat = select_b(ts, b0, basis, m_pre, opts.B_select, opts.alpha_select,
                         mix_seed(opts.seed, 101), opts.threads, &rep.b_scan);

    SieveFit f = fit(ts, rep.b_hat, basis, 1);
    const int m_hi = std::max(4, static_cast<int>(std::lround(0.7 * std::cbrt(n))));
    std::vector<int> ladder;
    for (int m = std::max(1, 2 - opts.h0); m <= m_hi + opts.h0 && m < n - rep.b_hat - 1; ++m)
        ladder.push_back(m);
    rep.m_hat = select_m_mv(ts, f, ladder, opts.h0, &rep.mv_table);
    return rep;
}

} // namespace locstat
