#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "locstat/common.hpp"

namespace locstat {

/// Ordered real observations x_1..x_n.
struct TimeSeries {
    Vector values;

    TimeSeries() = default;
    explicit TimeSeries(Vector v) : values(std::move(v)) { validate(); }
    explicit TimeSeries(const std::vector<double>& v)
        : values(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()))) {
        validate();
    }

    int n() const { return static_cast<int>(values.size()); }

    /// x_i, 1-based as in the model equations.
    double at(int i) const { return values(i - 1); }

private:
    void validate() const {
        if (values.size() < 8)
            throw config_error("time series must have n >= 8, got " +
                               std::to_string(values.size()));
        if (!values.allFinite())
            throw config_error("time series contains non-finite values");
    }
};

} // namespace locstat
