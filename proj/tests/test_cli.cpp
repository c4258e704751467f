#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = LOCSTAT_CLI_PATH;

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "locstat_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

int run_cli(const std::string& args) {
    const std::string cmd = cli + " " + args + " > " + path_of("stdout.txt") + " 2> " +
                            path_of("stderr.txt");
    const int status = std::system(cmd.c_str());
#ifdef _WIN32
    return status;
#else
    return WEXITSTATUS(status);
#endif
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

} // namespace

TEST_CASE("simulate is byte-deterministic in the seed") {
    REQUIRE(run_cli("simulate --model tvar2 --n 256 --seed 7 --series " + path_of("a.csv") +
                    " --output " + path_of("a.json")) == 0);
    REQUIRE(run_cli("simulate --model tvar2 --n 256 --seed 7 --series " + path_of("b.csv") +
                    " --output " + path_of("b.json")) == 0);
    CHECK(slurp(path_of("a.csv")) == slurp(path_of("b.csv")));
    CHECK(!slurp(path_of("a.csv")).empty());

    json rec = load_json(path_of("a.json"));
    CHECK(rec["schema"] == "locstat/1");
    CHECK(rec["command"] == "simulate");
    CHECK(rec["config"]["seed"] == 7);
    CHECK(rec["result"]["n"] == 256);

    REQUIRE(run_cli("simulate --model tvar2 --n 256 --seed 8 --series " + path_of("c.csv") +
                    " --output " + path_of("c.json")) == 0);
    CHECK(slurp(path_of("a.csv")) != slurp(path_of("c.csv")));
}

TEST_CASE("simulate output feeds every data command") {
    REQUIRE(run_cli("simulate --model tvar2 --n 512 --seed 11 --series " + path_of("x.csv")) ==
            0);

    SUBCASE("fit") {
        REQUIRE(run_cli("fit --input " + path_of("x.csv") + " --b 2 --c 3 --coeffs " +
                        path_of("coeffs.csv") + " --output " + path_of("fit.json")) == 0);
        json rec = load_json(path_of("fit.json"));
        CHECK(rec["command"] == "fit");
        CHECK(rec["config"]["b"] == 2);
        CHECK(rec["config"]["c"] == 3);
        CHECK(rec["result"]["beta"].size() == 9);
        CHECK(rec["result"]["mse_hat"].get<double>() >= 0.0);
        const std::string coeffs = slurp(path_of("coeffs.csv"));
        CHECK(coeffs.rfind("t,phi_0,phi_1,phi_2\n", 0) == 0);
    }

    SUBCASE("forecast") {
        REQUIRE(run_cli("forecast --input " + path_of("x.csv") + " --b 1 --c 3 --h 2" +
                        " --output " + path_of("fc.json")) == 0);
        json rec = load_json(path_of("fc.json"));
        CHECK(rec["command"] == "forecast");
        CHECK(rec["result"]["horizon"] == 2);
        CHECK(rec["result"]["mse_hat"].get<double>() >= 0.0);
        CHECK(rec["result"]["coeffs_at_1"].size() == 2);
    }

    SUBCASE("stability-test") {
        REQUIRE(run_cli("stability-test --input " + path_of("x.csv") +
                        " --b 2 --c 3 --m 6 --B 200 --alpha 0.1 --seed 5 --output " +
                        path_of("st.json")) == 0);
        json rec = load_json(path_of("st.json"));
        CHECK(rec["command"] == "stability-test");
        const double p = rec["result"]["p_value"].get<double>();
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(rec["result"]["b"] == 2);
        CHECK(rec["result"]["m"] == 6);
        CHECK(rec["result"]["variant"] == "lags_only");
        // reject agrees with the nominal level up to the bootstrap grid
        if (rec["result"]["reject"].get<bool>()) CHECK(p < 0.1 + 1e-12);
    }

    SUBCASE("pacf") {
        REQUIRE(run_cli("pacf --input " + path_of("x.csv") +
                        " --b0 5 --c 3 --b1 3 --B 200 --seed 5 --surface " +
                        path_of("surface.csv") + " --output " + path_of("pacf.json")) == 0);
        json rec = load_json(path_of("pacf.json"));
        CHECK(rec["command"] == "pacf");
        CHECK(rec["result"]["b0"] == 5);
        CHECK(rec["result"]["grid_points"] == 101);
        CHECK(rec["result"]["zero_test"]["b1"] == 3);
        const std::string surface = slurp(path_of("surface.csv"));
        CHECK(surface.rfind("t,rho_1,rho_2,rho_3,rho_4,rho_5\n", 0) == 0);
    }
}

TEST_CASE("randomized results are thread-count invariant") {
    REQUIRE(run_cli("simulate --model tvar2 --n 256 --seed 21 --series " + path_of("t.csv")) ==
            0);
    REQUIRE(run_cli("stability-test --input " + path_of("t.csv") +
                    " --b 1 --c 3 --m 6 --B 300 --seed 9 --threads 1 --output " +
                    path_of("t1.json")) == 0);
    REQUIRE(run_cli("stability-test --input " + path_of("t.csv") +
                    " --b 1 --c 3 --m 6 --B 300 --seed 9 --threads 4 --output " +
                    path_of("t4.json")) == 0);
    CHECK(load_json(path_of("t1.json"))["result"] == load_json(path_of("t4.json"))["result"]);
}

TEST_CASE("pacf surface of a threshold model is lag-one dominated") {
    REQUIRE(run_cli("simulate --model setar --a1 0.6 --a2 0.3 --n 4096 --seed 3 --series " +
                    path_of("setar.csv")) == 0);
    REQUIRE(run_cli("pacf --input " + path_of("setar.csv") + " --b0 5 --c 3 --surface " +
                    path_of("setar_surface.csv") + " --output " + path_of("setar.json")) == 0);
    std::ifstream in(path_of("setar_surface.csv"));
    std::string line;
    std::getline(in, line); // header
    double lag1_min = 1e9, rest_max = 0.0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        int col = 0;
        while (std::getline(row, cell, ',')) {
            if (col == 1) lag1_min = std::min(lag1_min, std::abs(std::stod(cell)));
            if (col > 1) rest_max = std::max(rest_max, std::abs(std::stod(cell)));
            ++col;
        }
    }
    CHECK(lag1_min > rest_max);
}

TEST_CASE("study command writes the table schema") {
    REQUIRE(run_cli("study --mode size --models tvar2 --n 256 --reps 5 --B 100 --b 2 --c 3"
                    " --m 6 --seed 4 --table " +
                    path_of("study.csv") + " --output " + path_of("study.json")) == 0);
    const std::string table = slurp(path_of("study.csv"));
    CHECK(table.rfind("model,n,basis,alpha_or_delta,metric,value,mc_stderr,reps\n", 0) == 0);
    CHECK(table.find("tvar2,256,fourier") != std::string::npos);
    json rec = load_json(path_of("study.json"));
    CHECK(rec["result"]["rows"] == 1);

    // zero repetitions: header-only table, success
    REQUIRE(run_cli("study --mode size --models tvar2 --n 256 --reps 0 --table " +
                    path_of("study0.csv")) == 0);
    CHECK(slurp(path_of("study0.csv")) ==
          "model,n,basis,alpha_or_delta,metric,value,mc_stderr,reps\n");
}

TEST_CASE("error exit codes") {
    // malformed CSV -> 2
    {
        std::ofstream out(path_of("bad.csv"));
        out << "1\n2\noops\n4\n5\n6\n7\n8\n";
    }
    CHECK(run_cli("fit --input " + path_of("bad.csv") + " --b 1 --c 1") == 2);
    CHECK(slurp(path_of("stderr.txt")).find("line 3") != std::string::npos);

    // missing input -> 2
    CHECK(run_cli("fit --input " + path_of("missing.csv") + " --b 1 --c 1") == 2);

    // unknown basis -> 2
    REQUIRE(run_cli("simulate --model tvar2 --n 64 --seed 1 --series " + path_of("s.csv")) == 0);
    CHECK(run_cli("fit --input " + path_of("s.csv") + " --b 1 --c 1 --basis spline") == 2);

    // unknown flag -> 2
    CHECK(run_cli("fit --input " + path_of("s.csv") + " --nope 1") == 2);

    // rank-deficient design -> 3
    {
        std::ofstream out(path_of("const.csv"));
        for (int i = 0; i < 16; ++i) out << "2\n";
    }
    CHECK(run_cli("fit --input " + path_of("const.csv") + " --b 1 --c 1") == 3);

    // help -> 0
    CHECK(run_cli("--help") == 0);
}
