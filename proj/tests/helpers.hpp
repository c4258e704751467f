#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "locstat/locstat.hpp"

namespace testutil {

inline locstat::TimeSeries white_noise(int n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng = locstat::make_rng(seed);
    std::normal_distribution<double> gauss(0.0, sd);
    locstat::Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = gauss(rng);
    return locstat::TimeSeries{std::move(x)};
}

/// Stationary AR(1) with unit Gaussian innovations, no envelope.
inline locstat::TimeSeries ar1(double a, int n, std::uint64_t seed) {
    locstat::ModelSpec s;
    s.family = locstat::ModelFamily::tvAR2;
    s.a1 = locstat::CoeffFn::constant(a);
    s.a2 = locstat::CoeffFn::constant(0.0);
    s.innovation = locstat::Innovation::Gaussian;
    s.envelope = false;
    s.n = n;
    s.seed = seed;
    return locstat::simulate(s);
}

/// Stationary AR(2) with unit Gaussian innovations, no envelope.
inline locstat::TimeSeries ar2(double a1, double a2, int n, std::uint64_t seed) {
    locstat::ModelSpec s;
    s.family = locstat::ModelFamily::tvAR2;
    s.a1 = locstat::CoeffFn::constant(a1);
    s.a2 = locstat::CoeffFn::constant(a2);
    s.innovation = locstat::Innovation::Gaussian;
    s.envelope = false;
    s.n = n;
    s.seed = seed;
    return locstat::simulate(s);
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace testutil
