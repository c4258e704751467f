#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "locstat/common.hpp"
#include "locstat/daubechies_filters.hpp"

namespace locstat {

enum class BasisKind { Fourier, Legendre, DaubechiesPeriodized };

inline std::string to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::Fourier: return "fourier";
        case BasisKind::Legendre: return "legendre";
        case BasisKind::DaubechiesPeriodized: return "daubechies";
    }
    return "unknown";
}

struct BasisOptions {
    int quadrature_points = 4096; // composite-Simpson interval count for [0,1], even
    // Daubechies only:
    int wavelet_order = 9;        // N, filter length 2N
    int extra_levels = 6;         // table level L = J_n + extra_levels
};

/// Orthonormal sieve basis on [0,1].
///
/// Function ordering:
///   Fourier:  1, sqrt(2)cos(2*pi*t), sqrt(2)sin(2*pi*t), sqrt(2)cos(4*pi*t), ...
///   Legendre: sqrt(2k+1) * P_k(2t-1), k = 0..c-1
///   DaubechiesPeriodized: the c = 2^{J_n} periodized father wavelets
///     phi_{J_n,k}(t) = 2^{J_n/2} sum_l phi(2^{J_n} t + 2^{J_n} l - k),
///     tabulated on a dyadic grid of 2^L points via the cascade algorithm
///     and linearly interpolated in between.
///
/// Immutable after construction.
class Basis {
public:
    Basis(BasisKind kind, int c, BasisOptions options = {})
        : kind_(kind), c_(c), options_(options) {
        if (c < 1) throw config_error("basis: c must be >= 1, got " + std::to_string(c));
        if (options_.quadrature_points < 2 || options_.quadrature_points % 2 != 0)
            throw config_error("basis: quadrature_points must be even and >= 2");
        if (kind == BasisKind::DaubechiesPeriodized) {
            if (options_.wavelet_order < 2)
                throw config_error("basis: wavelet order N must be >= 2");
            level_ = 0;
            while ((1 << level_) < c) ++level_;
            if ((1 << level_) != c)
                throw config_error("basis: Daubechies c must be a power of two, got " +
                                   std::to_string(c));
            if (options_.extra_levels < 4)
                throw config_error("basis: wavelet table level L must be >= J_n + 4");
            build_wavelet_table();
        }
        compute_mean();
    }

    BasisKind kind() const { return kind_; }
    int size() const { return c_; }
    int quadrature_points() const { return options_.quadrature_points; }
    int wavelet_order() const { return options_.wavelet_order; }
    int dyadic_level() const { return level_; }

    /// B(t) = (alpha_1(t), ..., alpha_c(t)).
    Vector eval(double t) const {
        if (!(t >= 0.0 && t <= 1.0))
            throw config_error("basis: t must lie in [0,1], got " + std::to_string(t));
        Vector v(c_);
        switch (kind_) {
            case BasisKind::Fourier: {
                v(0) = 1.0;
                const double sqrt2 = std::numbers::sqrt2;
                for (int k = 1; k < c_; ++k) {
                    const int freq = (k + 1) / 2;
                    const double arg = 2.0 * std::numbers::pi * freq * t;
                    v(k) = (k % 2 == 1) ? sqrt2 * std::cos(arg) : sqrt2 * std::sin(arg);
                }
                break;
            }
            case BasisKind::Legendre: {
                const double x = 2.0 * t - 1.0;
                for (int k = 0; k < c_; ++k)
                    v(k) = std::sqrt(2.0 * k + 1.0) * std::legendre(static_cast<unsigned>(k), x);
                break;
            }
            case BasisKind::DaubechiesPeriodized: {
                const int grid = static_cast<int>(table_.rows()) - 1; // 2^L
                const double pos = t * grid;
                int g = static_cast<int>(pos);
                if (g >= grid) g = grid - 1;
                const double frac = pos - g;
                v = (1.0 - frac) * table_.row(g).transpose() +
                    frac * table_.row(g + 1).transpose();
                break;
            }
        }
        return v;
    }

    /// Basis values at the quadrature nodes g/N_q, g = 0..N_q.
    const Matrix& quad_table() const {
        if (quad_table_.size() == 0) {
            const int nq = options_.quadrature_points;
            Matrix tbl(nq + 1, c_);
            for (int g = 0; g <= nq; ++g)
                tbl.row(g) = eval(static_cast<double>(g) / nq).transpose();
            quad_table_ = std::move(tbl);
        }
        return quad_table_;
    }

    /// Bbar = integral of B(t) over [0,1] (composite Simpson).
    const Vector& mean() const { return mean_; }

    /// W = I - Bbar Bbar^T.
    Matrix centering_matrix() const {
        return Matrix::Identity(c_, c_) - mean_ * mean_.transpose();
    }

    /// Gram matrix of the basis under the same quadrature rule.
    Matrix gram() const {
        const Matrix& tbl = quad_table();
        const int nq = options_.quadrature_points;
        Matrix g = Matrix::Zero(c_, c_);
        for (int i = 0; i <= nq; ++i)
            g.noalias() += simpson_weight(i, nq) * tbl.row(i).transpose() * tbl.row(i);
        return g / (3.0 * nq);
    }

    /// Composite-Simpson integral of f sampled on the quadrature nodes
    /// (size N_q + 1, N_q even).
    static double integrate(const Vector& samples) {
        const Eigen::Index n = samples.size() - 1;
        double s = samples(0) + samples(n);
        for (Eigen::Index i = 1; i < n; ++i)
            s += (i % 2 == 1 ? 4.0 : 2.0) * samples(i);
        return s / (3.0 * static_cast<double>(n));
    }

private:
    static double simpson_weight(int i, int nq) {
        if (i == 0 || i == nq) return 1.0;
        return i % 2 == 1 ? 4.0 : 2.0;
    }

    void compute_mean() {
        const Matrix& tbl = quad_table();
        const int nq = options_.quadrature_points;
        Vector m = Vector::Zero(c_);
        for (int i = 0; i <= nq; ++i) m += simpson_weight(i, nq) * tbl.row(i).transpose();
        mean_ = m / (3.0 * nq);
    }

    // Cascade algorithm: father wavelet on [0, 2N-1] at resolution 2^{-depth},
    // then periodization onto a 2^L grid over [0,1] with L = J_n + extra_levels.
    void build_wavelet_table() {
        const int order = options_.wavelet_order;
        const std::vector<double>& h = daubechies_filter(order);
        const int support = 2 * order - 1;

        // phi at the integers: eigenvector of A_{ij} = sqrt(2) h_{2i-j} for
        // eigenvalue 1, with phi(0) = phi(2N-1) = 0 and sum phi(k) = 1.
        const double sqrt2 = std::numbers::sqrt2;
        Matrix a = Matrix::Zero(support, support);
        for (int i = 0; i < support; ++i)
            for (int j = 0; j < support; ++j) {
                const int idx = 2 * i - j;
                if (idx >= 0 && idx < 2 * order) a(i, j) = sqrt2 * h[static_cast<size_t>(idx)];
            }
        Eigen::EigenSolver<Matrix> es(a);
        int best = 0;
        double best_dist = std::abs(es.eigenvalues()(0) - 1.0);
        for (int k = 1; k < support; ++k) {
            const double d = std::abs(es.eigenvalues()(k) - 1.0);
            if (d < best_dist) { best_dist = d; best = k; }
        }
        Vector phi = es.eigenvectors().col(best).real();
        phi /= phi.sum();

        // Refine: phi(x) = sqrt(2) sum_k h_k phi(2x - k), doubling resolution.
        const int depth = options_.extra_levels;
        std::vector<double> cur(static_cast<size_t>(support) + 1, 0.0);
        for (int k = 0; k < support; ++k) cur[static_cast<size_t>(k)] = phi(k);
        int res = 1; // points per unit interval
        for (int d = 0; d < depth; ++d) {
            const int new_res = 2 * res;
            std::vector<double> next(static_cast<size_t>(support) * new_res + 1, 0.0);
            for (size_t m = 0; m < next.size(); ++m) {
                // x = m/new_res; 2x - k lands on coarse index m - k*res
                double s = 0.0;
                for (int k = 0; k < 2 * order; ++k) {
                    const long idx = static_cast<long>(m) - static_cast<long>(k) * res;
                    if (idx >= 0 && idx < static_cast<long>(cur.size()))
                        s += h[static_cast<size_t>(k)] * cur[static_cast<size_t>(idx)];
                }
                next[m] = sqrt2 * s;
            }
            cur = std::move(next);
            res = new_res;
        }
        // cur[i] = phi(i / res), i = 0..support*res, res = 2^{extra_levels}.

        // Periodized table on t = g / 2^L, g = 0..2^L, L = J_n + extra_levels.
        const int L = level_ + options_.extra_levels;
        const int grid = 1 << L;
        const int jn_scale = 1 << level_; // 2^{J_n}
        const double norm = std::pow(2.0, level_ / 2.0);
        table_ = Matrix::Zero(grid + 1, c_);
        for (int g = 0; g < grid; ++g) {
            for (int k = 0; k < c_; ++k) {
                // arg = 2^{J_n}(t + l) - k with t = g/2^L; in units of 1/res:
                // arg*res = g + (l*jn_scale - k)*res, exact on the cascade grid.
                double s = 0.0;
                const int lmax = (support + c_) / jn_scale + 2;
                for (int l = -lmax; l <= lmax; ++l) {
                    const long idx = static_cast<long>(g) +
                                     (static_cast<long>(l) * jn_scale - k) * res;
                    if (idx >= 0 && idx < static_cast<long>(cur.size()))
                        s += cur[static_cast<size_t>(idx)];
                }
                table_(g, k) = norm * s;
            }
        }
        table_.row(grid) = table_.row(0); // period 1
    }

    BasisKind kind_;
    int c_;
    BasisOptions options_;
    int level_ = 0;   // J_n (wavelets only)
    Matrix table_;    // wavelet dyadic table
    Vector mean_;
    mutable Matrix quad_table_;
};

inline Basis make_basis(BasisKind kind, int c, BasisOptions options = {}) {
    return Basis(kind, c, options);
}

inline BasisKind basis_kind_from_string(const std::string& s) {
    if (s == "fourier") return BasisKind::Fourier;
    if (s == "legendre") return BasisKind::Legendre;
    if (s == "daubechies") return BasisKind::DaubechiesPeriodized;
    throw config_error("unknown basis kind: " + s);
}

} // namespace locstat
