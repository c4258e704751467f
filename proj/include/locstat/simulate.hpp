#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "locstat/rng.hpp"
#include "locstat/time_series.hpp"

namespace locstat {

enum class ModelFamily {
    tvAR2,         // x_i = a1(t) x_{i-1} + a2(t) x_{i-2} + eps_i
    tvMA2,         // x_i = a1(t) eps_{i-1} + a2(t) eps_{i-2} + eps_i
    SETAR,         // regime by sign of x_{i-1}
    MarkovSwitch,  // regime by a 2-state chain, initial state 1
    Bilinear,      // x_i = (a1(t) eps_{i-1} + a2(t)) x_{i-1} + eps_i
    ARMA11,        // stationary, x_i - 0.5 x_{i-1} = eps_i + 0.5 eps_{i-1}
    StatSETAR,     // stationary SETAR 0.4 / 0.5
    NsLinear6,     // x_i = delta sin(4 pi t) x_{i-1} + eps_i
    NsNonlin7,     // sinusoidal regime then SETAR 0.4 / 0.3 after 0.75 n
};

enum class Innovation { Gaussian, StudentT5 };

/// Coefficient function a(t) = base + delta * sin(2 pi t).
struct CoeffFn {
    double base = 0.0;
    double delta = 0.0;
    double operator()(double t) const {
        return base + delta * std::sin(2.0 * std::numbers::pi * t);
    }
    static CoeffFn constant(double k) { return {k, 0.0}; }
};

struct ModelSpec {
    ModelFamily family = ModelFamily::tvAR2;
    CoeffFn a1 = CoeffFn::constant(0.4);
    CoeffFn a2 = CoeffFn::constant(0.4);
    Innovation innovation = Innovation::StudentT5;
    bool envelope = true;      // eps_i = (0.4 + 0.4 |sin(2 pi i/n)|) eta_i
    double delta = 0.0;        // NsLinear6 / NsNonlin7 amplitude
    int n = 256;
    std::uint64_t seed = 0;
    int burn_in = 200;
};

inline ModelFamily model_family_from_string(const std::string& s) {
    if (s == "tvar2") return ModelFamily::tvAR2;
    if (s == "tvma2") return ModelFamily::tvMA2;
    if (s == "setar") return ModelFamily::SETAR;
    if (s == "markov") return ModelFamily::MarkovSwitch;
    if (s == "bilinear") return ModelFamily::Bilinear;
    if (s == "arma11") return ModelFamily::ARMA11;
    if (s == "stat-setar") return ModelFamily::StatSETAR;
    if (s == "ns-linear") return ModelFamily::NsLinear6;
    if (s == "ns-nonlin") return ModelFamily::NsNonlin7;
    throw config_error("unknown model family: " + s);
}

/// Deterministic draw of one benchmark simulation model. Burn-in indices
/// use time argument max(i,1)/n, freezing the coefficient functions near t=0.
inline TimeSeries simulate(const ModelSpec& spec) {
    if (spec.n < 8) throw config_error("simulate: n must be >= 8");
    if (spec.burn_in < 0) throw config_error("simulate: burn_in must be >= 0");
    std::mt19937_64 rng = make_rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::student_t_distribution<double> t5(5.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const int n = spec.n;
    const bool stationary_family = spec.family == ModelFamily::ARMA11 ||
                                   spec.family == ModelFamily::StatSETAR ||
                                   spec.family == ModelFamily::NsLinear6 ||
                                   spec.family == ModelFamily::NsNonlin7;
    const bool use_envelope = spec.envelope && !stationary_family;

    Vector out(n);
    double x1 = 0.0, x2 = 0.0;      // x_{i-1}, x_{i-2}
    double e1 = 0.0, e2 = 0.0;      // eps_{i-1}, eps_{i-2}
    int state = 1;                  // Markov chain, initial state 1

    for (int i = 1 - spec.burn_in; i <= n; ++i) {
        const double t = static_cast<double>(std::max(i, 1)) / n;
        // families 6-7 use standard normal innovations regardless of spec
        const double eta = (!stationary_family && spec.innovation == Innovation::StudentT5)
                               ? t5(rng)
                               : gauss(rng);
        double eps = eta;
        if (use_envelope)
            eps *= 0.4 + 0.4 * std::abs(std::sin(2.0 * std::numbers::pi * t));

        double x = 0.0;
        switch (spec.family) {
            case ModelFamily::tvAR2:
                x = spec.a1(t) * x1 + spec.a2(t) * x2 + eps;
                break;
            case ModelFamily::tvMA2:
                x = spec.a1(t) * e1 + spec.a2(t) * e2 + eps;
                break;
            case ModelFamily::SETAR:
                x = (x1 >= 0.0 ? spec.a1(t) : spec.a2(t)) * x1 + eps;
                break;
            case ModelFamily::MarkovSwitch: {
                // advance the chain: p00 = 2/3, p01 = 1/3, p10 = p11 = 1/2
                const double u = unif(rng);
                state = (state == 0) ? (u < 2.0 / 3.0 ? 0 : 1) : (u < 0.5 ? 0 : 1);
                x = (state == 0 ? spec.a1(t) : spec.a2(t)) * x1 + eps;
                break;
            }
            case ModelFamily::Bilinear:
                x = (spec.a1(t) * e1 + spec.a2(t)) * x1 + eps;
                break;
            case ModelFamily::ARMA11:
                x = 0.5 * x1 + eps + 0.5 * e1;
                break;
            case ModelFamily::StatSETAR:
                x = (x1 >= 0.0 ? 0.4 : 0.5) * x1 + eps;
                break;
            case ModelFamily::NsLinear6:
                x = spec.delta * std::sin(4.0 * std::numbers::pi * t) * x1 + eps;
                break;
            case ModelFamily::NsNonlin7: {
                if (i <= 0.75 * n)
                    x = spec.delta * std::sin(4.0 * std::numbers::pi * t) * x1 + eps;
                else
                    x = (x1 >= 0.0 ? 0.4 : 0.3) * x1 + eps;
                break;
            }
        }
        if (!std::isfinite(x))
            throw numerical_error("simulate: series diverged at index " + std::to_string(i));
        x2 = x1;
        x1 = x;
        e2 = e1;
        e1 = eps;
        if (i >= 1) out(i - 1) = x;
    }
    return TimeSeries(std::move(out));
}

} // namespace locstat
