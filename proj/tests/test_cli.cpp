// End-to-end checks of the command line binary (path injected by CMake).

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path tmp = fs::temp_directory_path() /
                         ("varshrink_cli_out_" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string(VARSHRINK_CLI_PATH) + " " + args + " > " +
                            tmp.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    result.out = slurp(tmp);
    fs::remove(tmp);
    return result;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("alpha-star prints 12 significant digits") {
    const auto r = run_cli("alpha-star --p 4 --n 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1.23606797750\n");

    const auto unit = run_cli("alpha-star --p 1 --n 1");
    CHECK(unit.exit_code == 0);
    CHECK(unit.out == "1.00000000000\n");
}

TEST_CASE("invalid invocations exit 2") {
    CHECK(run_cli("alpha-star --p 0 --n 2").exit_code == 2);
    CHECK(run_cli("alpha-star --n 2").exit_code == 2);
    CHECK(run_cli("risk --estimator bogus").exit_code == 2);
    CHECK(run_cli("risk --method warp").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("verify nonesuch").exit_code == 2);
}

TEST_CASE("risk CSV: delta_0 risk is constant in tau") {
    const fs::path out = fs::temp_directory_path() / "varshrink_risk_d0.csv";
    const auto r = run_cli("risk --estimator best-equivariant --p 4 --n 2 "
                           "--tau-grid 0:10:1 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    std::ifstream in(out);
    std::string line;
    std::vector<double> risks;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            CHECK(line == "tau,risk,error_bound,method");
            seen_header = true;
            continue;
        }
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        risks.push_back(std::stod(line.substr(first + 1, second - first - 1)));
        CHECK(line.substr(line.rfind(',') + 1) == "quadrature");
    }
    REQUIRE(risks.size() == 11);
    for (double v : risks) {
        CHECK(std::abs(v - 0.5772156649015329) <= 1e-10);
    }
    fs::remove(out);
}

TEST_CASE("Monte Carlo risk files are byte-identical across reruns") {
    const fs::path out1 = fs::temp_directory_path() / "varshrink_mc_1.csv";
    const fs::path out2 = fs::temp_directory_path() / "varshrink_mc_2.csv";
    const std::string args = "risk --estimator simple-bayes --alpha 1 --p 4 --n 2 "
                             "--tau-grid 0,2,5 --method mc --samples 5000 --seed 7 ";
    CHECK(run_cli(args + "--out " + out1.string()).exit_code == 0);
    CHECK(run_cli(args + "--out " + out2.string()).exit_code == 0);
    const std::string a = slurp(out1);
    const std::string b = slurp(out2);
    CHECK(!a.empty());
    CHECK(a == b);
    fs::remove(out1);
    fs::remove(out2);
}

TEST_CASE("dominance exit codes track the verdict") {
    CHECK(run_cli("dominance --p 4 --n 2 --alpha-frac 1.0").exit_code == 0);
    CHECK(run_cli("dominance --p 4 --n 2 --alpha-frac 0.25").exit_code == 0);
    CHECK(run_cli("dominance --p 10 --n 10 --alpha-frac 1.0").exit_code == 0);
}

TEST_CASE("verify suites pass on the default and explicit cells") {
    CHECK(run_cli("verify proof --p 4 --n 2 --alpha-frac 1.0").exit_code == 0);
    CHECK(run_cli("verify bayes --p 4 --n 2 --a -2").exit_code == 0);

    const fs::path out = fs::temp_directory_path() / "varshrink_verify.json";
    const auto all = run_cli("verify all --out " + out.string());
    CHECK(all.exit_code == 0);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc.contains("metadata"));
    CHECK(doc.contains("verdicts"));
    for (const auto& [name, verdict] : doc["verdicts"].items()) {
        CHECK(verdict["pass"].get<bool>());
    }
    fs::remove(out);
}

TEST_CASE("report emits risk curves, delta tables, and a verdict summary") {
    const fs::path dir = fresh_dir("varshrink_report_test");
    const auto r = run_cli("report --out-dir " + dir.string());
    REQUIRE(r.exit_code == 0);

    for (const std::string tag : {"p1_n1", "p3_n5", "p4_n2", "p10_n10"}) {
        CHECK(fs::exists(dir / ("risk_" + tag + "_best_equivariant.csv")));
        CHECK(fs::exists(dir / ("risk_" + tag + "_stein.csv")));
        CHECK(fs::exists(dir / ("risk_" + tag + "_simple_bayes.csv")));
        CHECK(fs::exists(dir / ("delta_" + tag + ".dat")));
    }
    const auto doc = nlohmann::json::parse(slurp(dir / "summary.json"));
    for (const std::string tag : {"p1_n1", "p3_n5", "p4_n2", "p10_n10"}) {
        const auto& v = doc["verdicts"]["dominance_" + tag];
        CHECK(v["verdict"] == "dominates");
        CHECK(v["pass"].get<bool>());
    }

    // the tau = 0 delta of the (4,2) cell cross-matches a single-cell scan
    const fs::path cell_out = dir / "cell.csv";
    const double alpha_star_42 = doc["verdicts"]["dominance_p4_n2"]["alpha"];
    {
        std::ostringstream cmd;
        cmd << "dominance --p 4 --n 2 --alpha " << std::setprecision(17)
            << alpha_star_42 << " --tau-grid 0 --out " << cell_out.string();
        CHECK(run_cli(cmd.str()).exit_code == 0);
    }
    double single_cell = 0.0;
    {
        std::ifstream in(cell_out);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 't') continue;
            const auto first = line.find(',');
            const auto second = line.find(',', first + 1);
            single_cell = std::stod(line.substr(first + 1, second - first - 1));
        }
    }
    const double from_report = doc["tables"]["delta_p4_n2"]["delta"][0];
    CHECK(std::abs(single_cell - from_report) <= 1e-12);

    fs::remove_all(dir);
}
