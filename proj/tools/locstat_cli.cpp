// locstat command line front-end: fit, forecast, stability-test, pacf,
// simulate, study. Every command prints a JSON record with the fully
// resolved configuration; CSV artifacts go to the paths given by flags.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "locstat/locstat.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    std::string input;
    std::string output;      // JSON record; stdout when empty
    std::string basis = "fourier";
    int b = 0;               // <= 0: auto
    int c = 0;
    int m = 0;
    int h = 1;
    int B = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int threads = 0;         // <= 0: LOCSTAT_THREADS / hardware
};

int resolve_threads(int flag) {
    return flag >= 1 ? flag : locstat::default_threads();
}

void emit(const json& record, const std::string& path) {
    if (path.empty()) {
        std::cout << record.dump(2) << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw locstat::config_error("cannot open output file: " + path);
    out << record.dump(2) << "\n";
}

json config_json(const CommonOpts& o, int b, int c, int m) {
    return json{{"input", o.input},     {"basis", o.basis}, {"b", b},
                {"c", c},               {"m", m},           {"h", o.h},
                {"B", o.B},             {"alpha", o.alpha}, {"seed", o.seed},
                {"threads", resolve_threads(o.threads)}};
}

std::vector<int> default_c_grid(locstat::BasisKind kind) {
    switch (kind) {
        case locstat::BasisKind::DaubechiesPeriodized: return {2, 4, 8};
        case locstat::BasisKind::Fourier: return {1, 3, 5};
        case locstat::BasisKind::Legendre: return {1, 2, 3, 4};
    }
    return {1, 2, 3};
}

// Forecast-validation (b, c) selection on the default neighborhood grid.
std::pair<int, int> resolve_bc_forecast(const locstat::TimeSeries& ts, const CommonOpts& o,
                                        locstat::BasisKind kind, json& tuning) {
    int b = o.b, c = o.c;
    if (b > 0 && c > 0) return {b, c};
    std::vector<std::pair<int, int>> grid;
    const std::vector<int> b_cands = b > 0 ? std::vector<int>{b} : std::vector<int>{1, 2, 3};
    const std::vector<int> c_cands = c > 0 ? std::vector<int>{c} : default_c_grid(kind);
    for (int bb : b_cands)
        for (int cc : c_cands) grid.emplace_back(bb, cc);
    const int l = static_cast<int>(3.0 * std::log2(ts.n()));
    std::vector<locstat::ScoredCandidate> table;
    auto [bs, cs] = locstat::select_bc_forecast(ts, grid, l, kind, {}, &table);
    json scores = json::array();
    for (const auto& e : table)
        scores.push_back({{"b", static_cast<int>(e.candidate) / 1000},
                          {"c", static_cast<int>(e.candidate) % 1000},
                          {"mse", e.score},
                          {"feasible", e.feasible}});
    tuning["bc_grid"] = scores;
    return {bs, cs};
}

json forecast_json(const locstat::ForecastResult& r) {
    json coeffs = json::array();
    for (Eigen::Index j = 0; j < r.coeffs_at_1.size(); ++j) coeffs.push_back(r.coeffs_at_1(j));
    return json{{"horizon", r.horizon},
                {"point", r.point},
                {"mse_hat", r.mse_hat},
                {"mse_clipped", r.mse_clipped},
                {"coeffs_at_1", coeffs}};
}

json test_json(const locstat::StabilityTestResult& r) {
    return json{{"statistic", r.statistic},
                {"p_value", r.p_value},
                {"alpha", r.alpha},
                {"reject", r.reject},
                {"b", r.b},
                {"c", r.c},
                {"m", r.m},
                {"B", r.B},
                {"seed", r.seed},
                {"variant", r.variant == locstat::StatVariant::lags_only ? "lags_only"
                                                                         : "with_intercept"}};
}

void write_coeff_csv(const std::string& path, const locstat::SieveFit& f, int grid_points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw locstat::config_error("cannot open output file: " + path);
    out << "t";
    for (int j = 0; j <= f.b(); ++j) out << ",phi_" << j;
    out << "\n";
    for (int g = 0; g < grid_points; ++g) {
        const double t = static_cast<double>(g) / (grid_points - 1);
        out << locstat::format_double(t);
        for (int j = 0; j <= f.b(); ++j)
            out << "," << locstat::format_double(f.eval_coeff(j, t));
        out << "\n";
    }
}

void write_surface_csv(const std::string& path, const locstat::PacfSurface& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw locstat::config_error("cannot open output file: " + path);
    out << "t";
    for (int j = 1; j <= s.b0; ++j) out << ",rho_" << j;
    out << "\n";
    for (Eigen::Index g = 0; g < s.grid.size(); ++g) {
        out << locstat::format_double(s.grid(g));
        for (int j = 0; j < s.b0; ++j) out << "," << locstat::format_double(s.values(j, g));
        out << "\n";
    }
}

void write_study_csv(const std::string& path, const std::vector<locstat::StudyRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw locstat::config_error("cannot open output file: " + path);
    out << "model,n,basis,alpha_or_delta,metric,value,mc_stderr,reps\n";
    for (const auto& r : rows)
        out << r.model << "," << r.n << "," << r.basis << ","
            << locstat::format_double(r.alpha_or_delta) << "," << r.metric << ","
            << locstat::format_double(r.value) << "," << locstat::format_double(r.mc_stderr)
            << "," << r.reps << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"locally stationary time series toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    json record{{"schema", "locstat/1"}};

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input)
            cmd->add_option("--input,-i", o.input, "input series CSV")->required();
        cmd->add_option("--output,-o", o.output, "output JSON path (stdout when omitted)");
        cmd->set_help_flag("--help", "print help and exit");
        cmd->add_option("--basis", o.basis, "fourier | legendre | daubechies");
        cmd->add_option("--seed", o.seed, "RNG seed");
        cmd->add_option("--threads", o.threads, "worker cap (default LOCSTAT_THREADS)");
    };

    // fit
    auto* cmd_fit = app.add_subcommand("fit", "fit a time-varying AR(b) sieve model");
    add_common(cmd_fit, true);
    std::string coeff_path;
    int grid_points = 101;
    cmd_fit->add_option("--b", o.b, "AR order (auto when omitted)");
    cmd_fit->add_option("--c", o.c, "basis size (auto when omitted)");
    cmd_fit->add_option("--h", o.h, "forecast horizon used in the design");
    cmd_fit->add_option("--coeffs", coeff_path, "coefficient-function table CSV path");
    cmd_fit->add_option("--grid", grid_points, "rows in the coefficient table")
        ->check(CLI::Range(2, 100001));

    // forecast
    auto* cmd_fc = app.add_subcommand("forecast", "h-step-ahead forecast with MSE estimate");
    add_common(cmd_fc, true);
    cmd_fc->add_option("--b", o.b, "AR order (auto when omitted)");
    cmd_fc->add_option("--c", o.c, "basis size (auto when omitted)");
    cmd_fc->add_option("--h", o.h, "forecast horizon");

    // stability-test
    auto* cmd_st = app.add_subcommand("stability-test",
                                      "multiplier bootstrap test of coefficient stability");
    add_common(cmd_st, true);
    bool with_intercept = false;
    cmd_st->add_option("--b", o.b, "AR order (auto when omitted)");
    cmd_st->add_option("--c", o.c, "basis size (auto when omitted)");
    cmd_st->add_option("--m", o.m, "bootstrap window size (auto when omitted)");
    cmd_st->add_option("--B", o.B, "bootstrap replicates");
    cmd_st->add_option("--alpha", o.alpha, "nominal level");
    cmd_st->add_flag("--with-intercept", with_intercept, "include the intercept function");

    // pacf
    auto* cmd_pacf = app.add_subcommand("pacf", "time-varying PACF surface and zero test");
    add_common(cmd_pacf, true);
    int b0 = 10, b1 = 0, pacf_grid = 101;
    std::string surface_path = "pacf_surface.csv";
    cmd_pacf->add_option("--b0", b0, "largest lag");
    cmd_pacf->add_option("--b1", b1, "zero-test start lag (no test when omitted)");
    cmd_pacf->add_option("--c", o.c, "basis size (auto when omitted)");
    cmd_pacf->add_option("--m", o.m, "bootstrap window size (auto when omitted)");
    cmd_pacf->add_option("--B", o.B, "bootstrap replicates");
    cmd_pacf->add_option("--alpha", o.alpha, "nominal level");
    cmd_pacf->add_option("--surface", surface_path, "surface CSV path");
    cmd_pacf->add_option("--grid", pacf_grid, "time grid points")->check(CLI::Range(2, 100001));

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "draw one series from a benchmark model");
    add_common(cmd_sim, false);
    std::string model = "tvar2", innovation = "t5", series_path = "series.csv";
    locstat::ModelSpec mspec;
    double a1_base = 0.4, a1_delta = 0.0, a2_base = 0.4, a2_delta = 0.0, ns_delta = 0.0;
    bool no_envelope = false;
    cmd_sim->add_option("--model", model,
                        "tvar2 | tvma2 | setar | markov | bilinear | arma11 | "
                        "stat-setar | ns-linear | ns-nonlin");
    cmd_sim->add_option("--n", mspec.n, "series length")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--a1", a1_base, "a1 constant part");
    cmd_sim->add_option("--a1-delta", a1_delta, "a1 sine amplitude");
    cmd_sim->add_option("--a2", a2_base, "a2 constant part");
    cmd_sim->add_option("--a2-delta", a2_delta, "a2 sine amplitude");
    cmd_sim->add_option("--delta", ns_delta, "amplitude for ns-linear / ns-nonlin");
    cmd_sim->add_option("--innovation", innovation, "gaussian | t5");
    cmd_sim->add_option("--burn-in", mspec.burn_in, "burn-in length");
    cmd_sim->add_flag("--no-envelope", no_envelope, "disable the error envelope");
    cmd_sim->add_option("--series", series_path, "series CSV path");

    // study
    auto* cmd_study = app.add_subcommand("study", "Monte Carlo size/power/forecast study");
    add_common(cmd_study, false);
    locstat::StudyConfig scfg;
    std::string mode = "size", study_path = "study.csv";
    std::vector<std::string> model_names{"tvar2"};
    scfg.B = 1000;
    cmd_study->add_option("--mode", mode, "size | power | forecast");
    cmd_study->add_option("--models", model_names, "model families");
    cmd_study->add_option("--n", scfg.sample_sizes, "sample sizes");
    cmd_study->add_option("--reps", scfg.reps, "Monte Carlo repetitions");
    cmd_study->add_option("--B", scfg.B, "bootstrap replicates per test");
    cmd_study->add_option("--alpha", scfg.alpha, "nominal level");
    cmd_study->add_option("--delta", scfg.delta, "alternative amplitude");
    cmd_study->add_option("--b", scfg.b, "fixed AR order (auto when omitted)");
    cmd_study->add_option("--c", scfg.c, "fixed basis size (auto when omitted)");
    cmd_study->add_option("--m", scfg.m, "fixed window size (auto when omitted)");
    cmd_study->add_option("--b0", scfg.b0, "PACF scan depth for order selection");
    cmd_study->add_option("--B-select", scfg.B_select, "bootstrap size inside selection");
    cmd_study->add_option("--table", study_path, "study CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const locstat::BasisKind kind = locstat::basis_kind_from_string(o.basis);
    const int threads = resolve_threads(o.threads);

    if (*cmd_fit || *cmd_fc) {
        locstat::TimeSeries ts = locstat::read_series_csv(o.input);
        json tuning;
        auto [b, c] = resolve_bc_forecast(ts, o, kind, tuning);
        locstat::Basis basis(kind, c);
        record["config"] = config_json(o, b, c, 0);
        if (!tuning.is_null()) record["tuning"] = tuning;
        if (*cmd_fit) {
            record["command"] = "fit";
            locstat::SieveFit f = locstat::fit(ts, b, basis, o.h);
            auto [mse, clipped] = locstat::estimate_forecast_mse(f);
            json beta = json::array();
            for (Eigen::Index i = 0; i < f.beta().size(); ++i) beta.push_back(f.beta()(i));
            record["result"] = {{"n", f.n()},
                                {"b", f.b()},
                                {"c", f.c()},
                                {"h", f.h()},
                                {"beta", beta},
                                {"mse_hat", mse},
                                {"mse_clipped", clipped},
                                {"condition_estimate", f.cond_estimate()}};
            if (!coeff_path.empty()) {
                write_coeff_csv(coeff_path, f, grid_points);
                record["result"]["coeffs_csv"] = coeff_path;
            }
        } else {
            record["command"] = "forecast";
            locstat::ForecastResult r = locstat::forecast_h(ts, b, basis, o.h);
            record["result"] = forecast_json(r);
        }
        emit(record, o.output);
        return 0;
    }

    if (*cmd_st) {
        locstat::TimeSeries ts = locstat::read_series_csv(o.input);
        record["command"] = "stability-test";
        int b = o.b, c = o.c, m = o.m;
        if (b <= 0 || c <= 0 || m <= 0) {
            locstat::AutoTuneOptions topts;
            topts.kind = kind;
            topts.seed = o.seed;
            topts.threads = threads;
            locstat::TuningReport tr = locstat::auto_tune(ts, topts);
            if (b <= 0) b = tr.b_hat;
            if (c <= 0) c = tr.c_hat;
            if (m <= 0) m = tr.m_hat;
        }
        locstat::Basis basis(kind, c);
        const auto variant = with_intercept ? locstat::StatVariant::with_intercept
                                            : locstat::StatVariant::lags_only;
        locstat::StabilityTestResult r = locstat::stability_test(
            ts, b, basis, m, o.B, o.alpha, variant, locstat::mix_seed(o.seed, 1), threads);
        record["config"] = config_json(o, b, c, m);
        record["result"] = test_json(r);
        emit(record, o.output);
        return 0;
    }

    if (*cmd_pacf) {
        locstat::TimeSeries ts = locstat::read_series_csv(o.input);
        record["command"] = "pacf";
        int c = o.c;
        if (c <= 0) {
            const int theta = std::max(1, ts.n() / 10);
            c = locstat::select_c_cv(ts, 2, kind, theta, default_c_grid(kind));
            if (c < 2 && b1 > 0) c = 3; // zero test needs a non-constant basis
        }
        locstat::Basis basis(kind, c);
        locstat::PacfSurface s = locstat::pacf_surface(ts, b0, basis, pacf_grid, 5.0, threads);
        write_surface_csv(surface_path, s);
        record["config"] = config_json(o, b0, c, o.m);
        json skipped = json::array();
        for (bool f : s.skipped) skipped.push_back(f);
        record["result"] = {{"surface_csv", surface_path},
                            {"b0", s.b0},
                            {"grid_points", static_cast<int>(s.grid.size())},
                            {"skipped", skipped},
                            {"cap_exceeded", s.cap_exceeded}};
        if (b1 > 0) {
            int m = o.m;
            if (m <= 0) m = std::max(2, static_cast<int>(std::lround(std::cbrt(ts.n()))));
            record["config"]["m"] = m;
            locstat::StabilityTestResult r = locstat::pacf_zero_test(
                ts, b0, b1, basis, m, o.B, o.alpha, locstat::mix_seed(o.seed, 1), threads);
            record["result"]["zero_test"] = test_json(r);
            record["result"]["zero_test"]["b1"] = b1;
        }
        emit(record, o.output);
        return 0;
    }

    if (*cmd_sim) {
        record["command"] = "simulate";
        mspec.family = locstat::model_family_from_string(model);
        mspec.a1 = {a1_base, a1_delta};
        mspec.a2 = {a2_base, a2_delta};
        mspec.delta = ns_delta;
        mspec.envelope = !no_envelope;
        mspec.seed = o.seed;
        if (innovation == "gaussian")
            mspec.innovation = locstat::Innovation::Gaussian;
        else if (innovation == "t5")
            mspec.innovation = locstat::Innovation::StudentT5;
        else
            throw locstat::config_error("unknown innovation: " + innovation);
        locstat::TimeSeries ts = locstat::simulate(mspec);
        locstat::write_series_csv(series_path, ts);
        record["config"] = {{"model", model},
                            {"n", mspec.n},
                            {"a1", a1_base},
                            {"a1_delta", a1_delta},
                            {"a2", a2_base},
                            {"a2_delta", a2_delta},
                            {"delta", ns_delta},
                            {"innovation", innovation},
                            {"envelope", mspec.envelope},
                            {"burn_in", mspec.burn_in},
                            {"seed", o.seed}};
        record["result"] = {{"series_csv", series_path}, {"n", ts.n()}};
        emit(record, o.output);
        return 0;
    }

    // study
    record["command"] = "study";
    if (mode == "size")
        scfg.mode = locstat::StudyMode::Size;
    else if (mode == "power")
        scfg.mode = locstat::StudyMode::Power;
    else if (mode == "forecast")
        scfg.mode = locstat::StudyMode::Forecast;
    else
        throw locstat::config_error("unknown study mode: " + mode);
    scfg.models.clear();
    for (const auto& name : model_names)
        scfg.models.push_back(locstat::model_family_from_string(name));
    scfg.basis = kind;
    scfg.seed = o.seed;
    scfg.threads = threads;
    std::vector<locstat::StudyRow> rows = locstat::run_size_power_study(scfg);
    write_study_csv(study_path, rows);
    json sizes = json::array();
    for (int n : scfg.sample_sizes) sizes.push_back(n);
    record["config"] = {{"mode", mode},          {"models", model_names},
                        {"n", sizes},            {"basis", o.basis},
                        {"reps", scfg.reps},     {"B", scfg.B},
                        {"alpha", scfg.alpha},   {"delta", scfg.delta},
                        {"b", scfg.b},           {"c", scfg.c},
                        {"m", scfg.m},           {"b0", scfg.b0},
                        {"B_select", scfg.B_select}, {"seed", o.seed},
                        {"threads", threads}};
    record["result"] = {{"table_csv", study_path}, {"rows", static_cast<int>(rows.size())}};
    emit(record, o.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const locstat::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const locstat::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
