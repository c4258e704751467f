#pragma once

#include <string>

#include "locstat/basis.hpp"
#include "locstat/common.hpp"
#include "locstat/time_series.hpp"

namespace locstat {

/// Kronecker-structured sieve regression design.
///
/// Row for time index i (i = b+h .. i_max) is
///   (1, x_{i-h}, ..., x_{i-h-b+1}) (x) B(i/n),
/// with response x_i. Block j of c columns carries lag j (j = 0 is the
/// intercept block). Time arguments always use the full series length n.
struct DesignMatrix {
    Matrix rows;
    Vector response;
    int b = 0;
    int c = 0;
    int h = 1;
    int first_index = 0; // i of the first row (= b + h)
    int n = 0;           // full series length used for time normalization
};

inline DesignMatrix build_design(const TimeSeries& ts, int b, const Basis& basis,
                                 int h = 1, int i_max = -1) {
    if (b < 1) throw config_error("build_design: lag order b must be >= 1");
    if (h < 1) throw config_error("build_design: horizon h must be >= 1");
    const int n = ts.n();
    if (i_max < 0) i_max = n;
    if (i_max > n) throw config_error("build_design: i_max exceeds series length");
    const int c = basis.size();
    const int p = (b + 1) * c;
    const int first = b + h;
    const int n_rows = i_max - first + 1;
    if (n_rows <= p)
        throw config_error("build_design: underdetermined system, " +
                           std::to_string(n_rows) + " rows <= " + std::to_string(p) +
                           " columns (need n > b + h + (b+1)c)");

    DesignMatrix d;
    d.b = b;
    d.c = c;
    d.h = h;
    d.first_index = first;
    d.n = n;
    d.rows.resize(n_rows, p);
    d.response.resize(n_rows);
    for (int r = 0; r < n_rows; ++r) {
        const int i = first + r;
        const Vector bt = basis.eval(static_cast<double>(i) / n);
        d.rows.block(r, 0, 1, c) = bt.transpose();
        for (int j = 1; j <= b; ++j)
            d.rows.block(r, j * c, 1, c) = ts.at(i - h - j + 1) * bt.transpose();
        d.response(r) = ts.at(i);
    }
    return d;
}

} // namespace locstat
