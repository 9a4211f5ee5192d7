#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qri/cli.hpp"

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = qri::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempFile {
public:
    explicit TempFile(const std::string& content) {
        static int counter = 0;
        path_ = "qri_cli_test_" + std::to_string(counter++) + ".csv";
        std::ofstream f(path_);
        f << content;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

std::string data_file(const std::string& name) {
    return std::string(QRI_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("estimate on a constant-income file") {
    TempFile incomes("income\n7\n7\n7\n7\n7\n7\n7\n7\n");
    const auto r = run_cli({"estimate", "--in", incomes.path(), "--partition", "0.25"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.0000") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("estimate exits 1 on bad data with the error name") {
    TempFile empty("income\n");
    const auto r = run_cli({"estimate", "--in", empty.path()});
    CHECK(r.code == 1);
    CHECK(r.err.find("TooFewObservations") != std::string::npos);

    const auto r2 = run_cli({"estimate", "--in", "no_such_file_anywhere.csv"});
    CHECK(r2.code == 1);
    CHECK(r2.err.find("FileNotFound") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli({"no-such-command"}).code == 2);
    CHECK(run_cli({"estimate"}).code == 2);  // missing --in
    TempFile incomes("1\n2\n3\n4\n");
    CHECK(run_cli({"estimate", "--in", incomes.path(), "--partition", "0.7"}).code == 2);
    CHECK(run_cli({"theory", "--dist", "gauss:0,1"}).code == 2);
    CHECK(run_cli({"estimate", "--in", incomes.path(), "--grid", "1"}).code == 2);
}

TEST_CASE("theory prints the lognormal decomposition") {
    const auto r = run_cli({"theory", "--dist", "lognormal:0,1", "--partition", "0.2,0.4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.6638") != std::string::npos);
    CHECK(r.out.find("0.9171") != std::string::npos);
    CHECK(r.out.find("0.6352") != std::string::npos);
    CHECK(r.out.find("0.2144") != std::string::npos);
}

TEST_CASE("theory json output carries the resolved config") {
    const auto r = run_cli({"theory", "--dist", "exp:1", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["tool"] == "qri");
    CHECK(j["version"].is_string());
    CHECK(j["config"]["dist"] == "exp:1");
    CHECK(j["results"]["I"].get<double>() == doctest::Approx(0.7016).epsilon(2e-3));
}

TEST_CASE("decompose-exact matches the hand-computed example") {
    TempFile incomes("1\n2\n3\n4\n");
    const auto r = run_cli({"decompose-exact", "--in", incomes.path(), "--partition", "0.25",
                            "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["components"][0]["value"].get<double>() == doctest::Approx(0.75));
    CHECK(j["results"]["components"][1]["value"].get<double>() ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(j["results"]["total"]["value"].get<double>() ==
          doctest::Approx(13.0 / 24.0).epsilon(1e-12));
    CHECK(j["results"]["total"]["grid_j"] == "exact");
}

TEST_CASE("synth then estimate round-trips on the bundled tables") {
    const std::string pop = "qri_cli_test_pop.csv";
    const auto r = run_cli({"synth", "--bins", data_file("dwi_2004.csv"), "--tail-shape", "4",
                            "--scale", "1", "--seed", "42", "--out", pop});
    REQUIRE(r.code == 0);
    const auto est = run_cli({"estimate", "--in", pop, "--partition", "0.25"});
    CHECK(est.code == 0);
    CHECK(est.err.empty());
    std::remove(pop.c_str());
}

TEST_CASE("percentiles and kde subcommands") {
    TempFile incomes("income\n1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n");
    const auto r = run_cli({"percentiles", "--in", incomes.path(), "--probs", "0.5,0.9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("max") != std::string::npos);

    const std::string curve = "qri_cli_test_curve.csv";
    const auto k = run_cli({"kde", "--in", incomes.path(), "--truncate", "12", "--grid-points",
                            "32", "--out", curve});
    CHECK(k.code == 0);
    std::ifstream f(curve);
    std::string header;
    std::getline(f, header);
    CHECK(header == "x,density");
    std::remove(curve.c_str());
}

TEST_CASE("coverage smoke run with JSON report") {
    const std::string report = "qri_cli_test_report.json";
    const auto r = run_cli({"coverage", "--dist", "exp:1", "--n", "100", "--trials", "40",
                            "--partition", "0.25", "--seed", "7", "--out", report, "--format",
                            "json"});
    REQUIRE(r.code == 0);
    std::ifstream f(report);
    nlohmann::json j;
    f >> j;
    CHECK(j["command"] == "coverage");
    CHECK(j["config"]["seed"] == 7);
    CHECK(j["config"]["rng"] == "splitmix64");
    CHECK(j["results"]["per_component"].size() == 2);
    std::remove(report.c_str());
}
