#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "locstat/fit.hpp"
#include "locstat/parallel.hpp"
#include "locstat/rng.hpp"

namespace locstat {

enum class StatVariant { lags_only, with_intercept };

struct StabilityTestResult {
    double statistic = 0.0;            // nT
    std::vector<double> replicates;    // bootstrap quadratic forms, unsorted by draw order
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject = false;
    StatVariant variant = StatVariant::lags_only;
    int b = 0;
    int c = 0;
    int m = 0;
    int B = 0;
    std::uint64_t seed = 0;
};

/// L2 departure of the coefficient functions from their time averages:
///   T = sum_j integral (phi_j(t) - mean_j)^2 dt,
/// j over 1..b (lags_only) or 0..b (with_intercept). Composite Simpson
/// on the basis quadrature grid.
inline double stat_T(const SieveFit& fit, StatVariant variant = StatVariant::lags_only) {
    const Matrix& grid = fit.basis().quad_table();
    const int c = fit.c();
    const int j0 = (variant == StatVariant::with_intercept) ? 0 : 1;
    double total = 0.0;
    for (int j = j0; j <= fit.b(); ++j) {
        const Vector vals = grid * fit.beta().segment(j * c, c);
        const double mean = Basis::integrate(vals);
        const Vector centered = (vals.array() - mean).square().matrix();
        total += Basis::integrate(centered);
    }
    return total;
}

namespace detail {

inline Matrix block_centering(const Basis& basis, int b) {
    const int c = basis.size();
    const Matrix w = basis.centering_matrix();
    Matrix wblk = Matrix::Zero((b + 1) * c, (b + 1) * c);
    for (int j = 0; j <= b; ++j) wblk.block(j * c, j * c, c, c) = w;
    return wblk;
}

inline Matrix sandwich_gamma(const Matrix& sigma_hat, const Matrix& middle) {
    Eigen::FullPivLU<Matrix> lu(sigma_hat);
    if (!lu.isInvertible())
        throw numerical_error("gamma_hat: singular sigma_hat");
    const Matrix sigma_inv = lu.inverse();
    Matrix gamma = sigma_inv * middle * sigma_inv;
    return 0.5 * (gamma + gamma.transpose());
}

} // namespace detail

/// Gamma_hat = sigma_hat^{-1} P W_blk sigma_hat^{-1}, symmetrized. P zeroes
/// the intercept block for lags_only and is the identity for with_intercept.
inline Matrix gamma_hat(const SieveFit& fit, StatVariant variant = StatVariant::lags_only) {
    const int c = fit.c();
    Matrix middle = detail::block_centering(fit.basis(), fit.b());
    if (variant == StatVariant::lags_only)
        middle.block(0, 0, c, c).setZero();
    return detail::sandwich_gamma(fit.sigma_hat(), middle);
}

/// Precomputed bootstrap machinery shared by all replicates of one test.
///
/// Row i of z (i = b+1..n-m) holds (sum_{j=i}^{i+m} h_j) (x) B(i/n) with
/// h_j = (1, x_{j-1}, ..., x_{j-b}) * eps_j, so a replicate is the quadratic
/// form of scale * z^T R with i.i.d. standard Gaussian multipliers R.
class BootstrapContext {
public:
    BootstrapContext(const SieveFit& fit, const TimeSeries& ts, int m, Matrix gamma)
        : gamma_(std::move(gamma)) {
        const int n = ts.n();
        const int b = fit.b();
        const int c = fit.c();
        if (fit.h() != 1)
            throw config_error("bootstrap: fit must have horizon h = 1");
        if (m < 1 || m >= n - b)
            throw config_error("bootstrap: need 1 <= m < n - b, got m = " +
                               std::to_string(m));
        if (fit.first_index() != b + 1 ||
            static_cast<int>(fit.residuals().size()) != n - b)
            throw config_error("bootstrap: fit must cover the full series");

        // Prefix sums of h_j over j = b+1..n.
        const int p = (b + 1) * c;
        Matrix hsum(n - b + 1, b + 1);
        hsum.row(0).setZero();
        for (int j = b + 1; j <= n; ++j) {
            const double eps = fit.residuals()(j - b - 1);
            Vector hj(b + 1);
            hj(0) = eps;
            for (int l = 1; l <= b; ++l) hj(l) = ts.at(j - l) * eps;
            hsum.row(j - b) = hsum.row(j - b - 1) + hj.transpose();
        }

        const int count = n - m - b; // i = b+1 .. n-m
        if (count < 1) throw config_error("bootstrap: m too large for series length");
        z_.resize(count, p);
        for (int r = 0; r < count; ++r) {
            const int i = b + 1 + r;
            // window sum over j = i..i+m
            const Vector s = (hsum.row(i + m - b) - hsum.row(i - b - 1)).transpose();
            const Vector bt = fit.basis().eval(static_cast<double>(i) / n);
            for (int l = 0; l <= b; ++l)
                z_.block(r, l * c, 1, c) = s(l) * bt.transpose();
        }
        scale_ = 1.0 / std::sqrt(static_cast<double>(n - m - b + 1) *
                                 static_cast<double>(m));
    }

    int multiplier_count() const { return static_cast<int>(z_.rows()); }
    const Matrix& gamma() const { return gamma_; }

    /// One bootstrap quadratic form with the given multiplier stream.
    double replicate(std::mt19937_64& rng) const {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vector r(z_.rows());
        for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = gauss(rng);
        const Vector phi = scale_ * (z_.transpose() * r);
        return phi.dot(gamma_ * phi);
    }

    /// E[Phi Phi^T | data]: the windowed long-run covariance estimate used by
    /// the minimum-volatility selector.
    Matrix omega_hat() const {
        return (scale_ * scale_) * (z_.transpose() * z_);
    }

private:
    Matrix z_;
    Matrix gamma_;
    double scale_ = 1.0;
};

inline double bootstrap_replicate(const SieveFit& fit, const TimeSeries& ts, int m,
                                  std::mt19937_64& rng,
                                  StatVariant variant = StatVariant::lags_only) {
    BootstrapContext ctx(fit, ts, m, gamma_hat(fit, variant));
    return ctx.replicate(rng);
}

namespace detail {

/// Draws B replicates with per-replicate streams derived from (seed, index);
/// results are identical for any thread count.
inline std::vector<double> draw_replicates(const BootstrapContext& ctx, int B,
                                           std::uint64_t seed, int threads) {
    std::vector<double> reps(static_cast<size_t>(B));
    parallel_for(B, threads, [&](int r) {
        std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(r) + 1);
        reps[static_cast<size_t>(r)] = ctx.replicate(rng);
    });
    return reps;
}

/// Decision rule shared by the stability and PACF-zero tests: reject when the
/// observed statistic exceeds the empirical (1-alpha) order statistic;
/// p-value = 1 - B*/B with B* = #{replicates <= observed}.
inline void decide(StabilityTestResult& out, double observed,
                   std::vector<double> replicates, double alpha) {
    out.statistic = observed;
    out.alpha = alpha;
    out.B = static_cast<int>(replicates.size());
    std::vector<double> sorted = replicates;
    std::sort(sorted.begin(), sorted.end());
    const int b_star = static_cast<int>(
        std::upper_bound(sorted.begin(), sorted.end(), observed) - sorted.begin());
    out.p_value = 1.0 - static_cast<double>(b_star) / out.B;
    const int idx = static_cast<int>(std::floor(out.B * (1.0 - alpha)));
    out.reject = idx >= 1 && idx <= out.B && observed > sorted[static_cast<size_t>(idx - 1)];
    out.replicates = std::move(replicates);
}

} // namespace detail

/// Multiplier-bootstrap test of forecast-coefficient stability.
inline StabilityTestResult stability_test(const TimeSeries& ts, int b, const Basis& basis,
                                          int m, int B, double alpha,
                                          StatVariant variant = StatVariant::lags_only,
                                          std::uint64_t seed = 0, int threads = 1) {
    if (B < 100) throw config_error("stability_test: B must be >= 100");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("stability_test: alpha must be in (0,1)");
    SieveFit f = fit(ts, b, basis, 1);
    const double observed = ts.n() * stat_T(f, variant);
    BootstrapContext ctx(f, ts, m, gamma_hat(f, variant));
    std::vector<double> reps = detail::draw_replicates(ctx, B, seed, threads);

    StabilityTestResult out;
    out.variant = variant;
    out.b = b;
    out.c = basis.size();
    out.m = m;
    out.seed = seed;
    detail::decide(out, observed, std::move(reps), alpha);
    return out;
}

} // namespace locstat
