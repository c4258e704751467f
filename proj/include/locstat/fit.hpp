#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "locstat/basis.hpp"
#include "locstat/design.hpp"

namespace locstat {

/// Fitted time-varying AR(b) sieve model.
///
/// Coefficient function of lag j is phi_j(t) = beta-block-j . B(t).
/// Residuals include the fitted intercept:
///   eps_i = x_i - phi_0(i/n) - sum_j phi_j(i/n) x_{i-h-j+1},
/// stored for i = first_index .. i_max.
class SieveFit {
public:
    SieveFit(Vector beta, Basis basis, int b, int h, int n, int first_index,
             Vector residuals, Matrix sigma_hat, double cond_estimate)
        : beta_(std::move(beta)), basis_(std::move(basis)), b_(b), h_(h), n_(n),
          first_index_(first_index), residuals_(std::move(residuals)),
          sigma_hat_(std::move(sigma_hat)), cond_estimate_(cond_estimate) {}

    const Vector& beta() const { return beta_; }
    const Basis& basis() const { return basis_; }
    int b() const { return b_; }
    int c() const { return basis_.size(); }
    int h() const { return h_; }
    int n() const { return n_; }
    int first_index() const { return first_index_; }
    const Vector& residuals() const { return residuals_; }
    const Matrix& sigma_hat() const { return sigma_hat_; }
    double cond_estimate() const { return cond_estimate_; }

    /// phi_j(t).
    double eval_coeff(int j, double t) const {
        check_lag(j);
        const int c = basis_.size();
        return beta_.segment(j * c, c).dot(basis_.eval(t));
    }

    /// integral of phi_j over [0,1]; equals beta-block-j . Bbar.
    double coeff_mean(int j) const {
        check_lag(j);
        const int c = basis_.size();
        return beta_.segment(j * c, c).dot(basis_.mean());
    }

private:
    void check_lag(int j) const {
        if (j < 0 || j > b_)
            throw config_error("coefficient lag j out of range: " + std::to_string(j));
    }

    Vector beta_;
    Basis basis_;
    int b_;
    int h_;
    int n_;
    int first_index_;
    Vector residuals_;
    Matrix sigma_hat_;
    double cond_estimate_;
};

namespace detail {

/// Householder QR least squares with explicit rank check on the R diagonal.
inline Vector qr_solve(const Matrix& a, const Vector& rhs, const char* what) {
    Eigen::HouseholderQR<Matrix> qr(a);
    const Vector rdiag = qr.matrixQR().diagonal().cwiseAbs();
    const double rmax = rdiag.maxCoeff();
    const double rmin = rdiag.minCoeff();
    if (!(rmax > 0.0) || rmin < 1e-10 * rmax)
        throw numerical_error(std::string(what) + ": ill-conditioned design, " +
                              std::to_string(a.cols()) + " columns, R diagonal ratio " +
                              std::to_string(rmin / (rmax > 0 ? rmax : 1.0)));
    return qr.solve(rhs);
}

} // namespace detail

inline SieveFit fit(const TimeSeries& ts, int b, const Basis& basis, int h = 1,
                    int i_max = -1) {
    DesignMatrix d = build_design(ts, b, basis, h, i_max);
    Eigen::HouseholderQR<Matrix> qr(d.rows);
    const Vector rdiag = qr.matrixQR().diagonal().cwiseAbs();
    const double rmax = rdiag.maxCoeff();
    const double rmin = rdiag.minCoeff();
    if (!(rmax > 0.0) || rmin < 1e-10 * rmax)
        throw numerical_error("fit: ill-conditioned design with " +
                              std::to_string(d.rows.cols()) + " columns");
    Vector beta = qr.solve(d.response);
    Vector residuals = d.response - d.rows * beta;
    Matrix sigma = d.rows.transpose() * d.rows / static_cast<double>(ts.n());
    return SieveFit(std::move(beta), basis, b, h, ts.n(), d.first_index,
                    std::move(residuals), std::move(sigma), rmax / rmin);
}

} // namespace locstat
