#pragma once

#include <algorithm>
#include <cmath>

#include "locstat/fit.hpp"

namespace locstat {

struct ForecastResult {
    int horizon = 1;
    double point = 0.0;
    double mse_hat = 0.0;
    bool mse_clipped = false;  // raw variance estimate at t = 1 was negative
    Vector coeffs_at_1;        // (phi_0(1), ..., phi_b(1))
};

/// Variance-of-forecast-error estimate: regress squared residuals on the
/// basis functions and evaluate the fitted curve at t = 1, clipped below at 0.
/// Returns (value, clipped flag).
inline std::pair<double, bool> estimate_forecast_mse(const SieveFit& fit) {
    const Vector& eps = fit.residuals();
    const int rows = static_cast<int>(eps.size());
    const int c = fit.c();
    if (rows <= c)
        throw config_error("estimate_forecast_mse: too few residuals for c = " +
                           std::to_string(c));
    Matrix x(rows, c);
    const int n = fit.n();
    for (int r = 0; r < rows; ++r) {
        const int i = fit.first_index() + r;
        x.row(r) = fit.basis().eval(static_cast<double>(i) / n).transpose();
    }
    const Vector coeff = detail::qr_solve(x, eps.array().square().matrix(),
                                          "estimate_forecast_mse");
    const double raw = coeff.dot(fit.basis().eval(1.0));
    return {std::max(raw, 0.0), raw < 0.0};
}

/// One-step-ahead forecast x_{n+1} = phi_0(1) + sum_j phi_j(1) x_{n+1-j}.
inline ForecastResult forecast_one(const SieveFit& fit, const TimeSeries& ts) {
    if (fit.h() != 1)
        throw config_error("forecast_one: fit must have horizon h = 1");
    if (fit.n() != ts.n())
        throw config_error("forecast_one: fit/series length mismatch");
    const int b = fit.b();
    ForecastResult r;
    r.horizon = 1;
    r.coeffs_at_1.resize(b + 1);
    for (int j = 0; j <= b; ++j) r.coeffs_at_1(j) = fit.eval_coeff(j, 1.0);
    r.point = r.coeffs_at_1(0);
    for (int j = 1; j <= b; ++j) r.point += r.coeffs_at_1(j) * ts.at(ts.n() + 1 - j);
    auto [mse, clipped] = estimate_forecast_mse(fit);
    r.mse_hat = mse;
    r.mse_clipped = clipped;
    return r;
}

/// Direct h-step forecast: refit with regressors x_{i-h}, ..., x_{i-h-b+1}
/// and read the prediction at i = n + h, which uses x_n, ..., x_{n-b+1}.
inline ForecastResult forecast_h(const TimeSeries& ts, int b, const Basis& basis,
                                 int h) {
    SieveFit f = fit(ts, b, basis, h);
    const int n = ts.n();
    ForecastResult r;
    r.horizon = h;
    r.coeffs_at_1.resize(b + 1);
    for (int j = 0; j <= b; ++j) r.coeffs_at_1(j) = f.eval_coeff(j, 1.0);
    r.point = r.coeffs_at_1(0);
    for (int j = 1; j <= b; ++j) r.point += r.coeffs_at_1(j) * ts.at(n + 1 - j);
    auto [mse, clipped] = estimate_forecast_mse(f);
    r.mse_hat = mse;
    r.mse_clipped = clipped;
    return r;
}

} // namespace locstat
