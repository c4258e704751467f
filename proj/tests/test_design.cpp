#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "locstat/design.hpp"

using namespace locstat;

TEST_CASE("rows with a constant basis are plain lagged regressors") {
    // x = 5, 7, 9, ..., 19; with b = 1, c = 1 row i is (1, x_{i-1})
    std::vector<double> v;
    for (int i = 0; i < 8; ++i) v.push_back(5.0 + 2.0 * i);
    TimeSeries ts(v);
    Basis constant(BasisKind::Fourier, 1);
    DesignMatrix d = build_design(ts, 1, constant);
    REQUIRE(d.rows.rows() == 7);
    REQUIRE(d.rows.cols() == 2);
    CHECK(d.first_index == 2);
    CHECK(d.rows(0, 0) == doctest::Approx(1.0));
    CHECK(d.rows(0, 1) == doctest::Approx(5.0));
    CHECK(d.response(0) == doctest::Approx(7.0));
    CHECK(d.rows(1, 0) == doctest::Approx(1.0));
    CHECK(d.rows(1, 1) == doctest::Approx(7.0));
    CHECK(d.response(1) == doctest::Approx(9.0));
}

TEST_CASE("kronecker block structure") {
    TimeSeries ts = testutil::white_noise(64, 1);
    Basis basis(BasisKind::Fourier, 3);
    DesignMatrix d = build_design(ts, 2, basis, 1);
    const int c = 3;
    for (int r = 0; r < d.rows.rows(); r += 7) {
        const int i = d.first_index + r;
        const Vector bt = basis.eval(static_cast<double>(i) / ts.n());
        // intercept block is B(i/n); lag block j is x_{i-j} B(i/n)
        CHECK((d.rows.block(r, 0, 1, c).transpose() - bt).cwiseAbs().maxCoeff() <= 1e-12);
        for (int j = 1; j <= 2; ++j)
            CHECK((d.rows.block(r, j * c, 1, c).transpose() - ts.at(i - j) * bt)
                      .cwiseAbs()
                      .maxCoeff() <= 1e-12);
        CHECK(d.response(r) == doctest::Approx(ts.at(i)));
    }
}

TEST_CASE("horizon shifts the lag window") {
    TimeSeries ts = testutil::white_noise(64, 2);
    Basis constant(BasisKind::Fourier, 1);
    DesignMatrix d = build_design(ts, 1, constant, 3);
    CHECK(d.first_index == 4);
    // row for index i carries x_{i-3}
    CHECK(d.rows(0, 1) == doctest::Approx(ts.at(1)));
    CHECK(d.response(0) == doctest::Approx(ts.at(4)));
}

TEST_CASE("sizing errors") {
    TimeSeries ts = testutil::white_noise(20, 3);
    Basis basis(BasisKind::Fourier, 5);
    // 20 - 3 = 17 rows <= (2+1)*5 = 15 columns? 17 > 15 is fine; force failure with b = 3
    CHECK_THROWS_AS(build_design(ts, 3, basis, 1), config_error);
    CHECK_THROWS_AS(build_design(ts, 0, basis, 1), config_error);
    CHECK_THROWS_AS(build_design(ts, 1, basis, 0), config_error);
    CHECK_THROWS_AS(build_design(ts, 1, basis, 1, 99), config_error);
}
