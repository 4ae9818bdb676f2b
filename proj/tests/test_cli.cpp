#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

using tetraverify::cli::run;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "tetraverify_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"verify-algebra", "--mode", "exact", "--k", "0.3"}).code == 2);
    CHECK(invoke({"verify-algebra", "--mode", "approx", "--lambdas", "1/2,1/3,1/5"}).code == 2);
    CHECK(invoke({"verify-algebra", "--trials", "0"}).code == 2);
    CHECK(invoke({"verify-algebra", "--mode", "sideways"}).code == 2);
    CHECK(invoke({"survey", "--mode", "approx"}).code == 2);
    CHECK(invoke({"survey", "--k", ""}).code == 2);
    CHECK(invoke({"verify-tetrahedron", "--lambdas", "1/2,1/3"}).code == 2);
    CHECK(invoke({"verify-algebra", "--mode", "approx", "--k", "1.5"}).code == 2);
}

TEST_CASE("passing runs exit with 0") {
    CHECK(invoke({"verify-algebra", "--mode", "exact", "--trials", "3", "--seed", "7"}).code == 0);
    CHECK(invoke({"verify-algebra", "--mode", "approx", "--k", "0.6", "--trials", "3"}).code == 0);
    CHECK(invoke({"verify-tetrahedron", "--mode", "exact", "--trials", "3", "--seed", "42"}).code == 0);
    CHECK(invoke({"verify-tetrahedron", "--mode", "exact", "--lambdas", "1/3,2/5,-1/7,3/8"}).code == 0);
    CHECK(invoke({"selftest"}).code == 0);
}

TEST_CASE("selftest fails when a fault is injected") {
    const Result r = invoke({"selftest", "--inject-fault"});
    CHECK(r.code == 1);
}

TEST_CASE("--json - writes the report to stdout and the summary to stderr") {
    const Result r = invoke({"verify-algebra", "--mode", "exact", "--trials", "2", "--json", "-"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["tool"] == "tetraverify");
    CHECK(j["command"] == "verify-algebra");
    CHECK(j["status"] == "pass");
    CHECK(j["checks"].size() == 2);
    CHECK(j["config"]["seed"] == 0);
    CHECK(j.contains("wall_time_s"));
    CHECK(r.err.find("verify-algebra: pass") != std::string::npos);
}

TEST_CASE("JSON is reproducible apart from wall time") {
    const std::vector<std::string> args{"verify-tetrahedron", "--mode", "approx", "--k", "0", "--trials", "4",
                                        "--seed", "5", "--json", "-"};
    json a = json::parse(invoke(args).out);
    json b = json::parse(invoke(args).out);
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("survey writes CSV") {
    const fs::path csv = scratch("survey.csv");
    const Result r = invoke({"survey", "--k", "0,0.5", "--trials", "2", "--seed", "3", "--csv", csv.string()});
    CHECK(r.code == 0);
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "k,trial,seed,lambda1,lambda2,lambda3,lambda4,eq1_max_residual,tetra_residual,rank_flag");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 4);

    const Result piped = invoke({"survey", "--k", "0.5", "--trials", "1", "--csv", "-"});
    CHECK(piped.out.rfind("k,trial,seed", 0) == 0);
    CHECK(piped.err.find("survey: pass") != std::string::npos);
}

TEST_CASE("config file supplies defaults the command line can override") {
    const fs::path cfg = scratch("config.json");
    {
        std::ofstream out(cfg);
        out << R"({"mode": "approx", "k": 0.4, "trials": 2, "seed": 11})";
    }
    const Result from_file = invoke({"verify-algebra", "--config", cfg.string(), "--json", "-"});
    REQUIRE(from_file.code == 0);
    const json j = json::parse(from_file.out);
    CHECK(j["config"]["mode"] == "approx");
    CHECK(j["config"]["trials"] == 2);
    CHECK(j["config"]["k"][0] == 0.4);

    const Result overridden = invoke({"verify-algebra", "--config", cfg.string(), "--trials", "1", "--json", "-"});
    CHECK(json::parse(overridden.out)["config"]["trials"] == 1);

    CHECK(invoke({"verify-algebra", "--config", scratch("missing.json").string()}).code == 2);
}

TEST_CASE("solve-s dumps the requested matrix") {
    const Result r = invoke({"solve-s", "--mode", "exact", "--lambdas", "1/3,2/7,3/5", "--json", "-"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const json& payload = j["checks"][0]["payload"];
    CHECK(payload["body"].size() == 8);
    CHECK(payload["body"][0][0] == "1");
    CHECK(payload["algebra_exact_zero"] == true);

    const Result solved = invoke({"solve-s", "--mode", "approx", "--k", "0.5", "--json", "-"});
    REQUIRE(solved.code == 0);
    CHECK(json::parse(solved.out)["checks"][0]["payload"]["diagnostics"]["column_rank"] == 8);

    CHECK(invoke({"solve-s", "--mode", "approx", "--k", "0.5", "--source", "closed"}).code == 2);
    CHECK(invoke({"solve-s", "--triple", "1,2"}).code == 2);
}

TEST_CASE("TETRAVERIFY_THREADS does not change results") {
    const std::vector<std::string> args{"verify-tetrahedron", "--mode", "exact", "--trials", "6", "--json", "-"};
    ::setenv("TETRAVERIFY_THREADS", "1", 1);
    json a = json::parse(invoke(args).out);
    ::setenv("TETRAVERIFY_THREADS", "4", 1);
    json b = json::parse(invoke(args).out);
    ::unsetenv("TETRAVERIFY_THREADS");
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    CHECK(a == b);
}
