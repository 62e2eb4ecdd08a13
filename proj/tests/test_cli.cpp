#include "doctest.h"

#include "hyperlab/cli.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = hyperlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    const Run r = run(std::move(args));
    REQUIRE(r.code == hyperlab::cli::kExitOk);
    return json::parse(r.out);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hyperlab_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("classify examples") {
    const json e = run_json({"classify", "--B", "2", "--E", "1"});
    CHECK(e["tool_version"] == hyperlab::cli::kToolVersion);
    CHECK(e["subcommand"] == "classify");
    CHECK(e["regime"] == "elliptic");
    CHECK(e["E_c"] == 2.0);
    CHECK(e["det"] == 0.5);
    CHECK(std::abs(e["T_E"].get<double>() - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(e["wall_time_ms"].is_null());

    const json p = run_json({"classify", "--B", "2", "--E", "2"});
    CHECK(p["regime"] == "parabolic");
    CHECK_FALSE(p.contains("T_E"));

    const json h = run_json({"classify", "--B", "2", "--E", "4"});
    CHECK(h["regime"] == "hyperbolic");
    CHECK(h["lyapunov_rate"] == 2.0);

    CHECK(run_json({"classify", "--timing"})["wall_time_ms"].is_number());
}

TEST_CASE("spectra example") {
    const json s = run_json({"spectra", "--B", "2", "--k", "10", "--m", "3"});
    CHECK(s["lambda"] == "64/1");
    CHECK(s["scaled"] == 0.64);
    const json all = run_json({"spectra", "--B", "3/2", "--k", "4"});
    CHECK(all["levels"].size() == 6);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"--help"}).code == hyperlab::cli::kExitOk);
    CHECK(run({"classify", "--B", "-1"}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"classify", "--B", "abc"}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"period", "--B", "2", "--E", "2"}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"spectra", "--B", "1/3", "--k", "10"}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"classify", "--format", "csv"}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"classify", "--format", "xml"}).code == hyperlab::cli::kExitUsage);
    CHECK(run({"decay-fit", "--input", "/nonexistent/table.csv"}).code == hyperlab::cli::kExitRuntime);
    const Run bad = run({"frobnicate"});
    CHECK_FALSE(bad.err.empty());
}

TEST_CASE("atomic output with sidecar and decay-fit round trip") {
    TempDir dir;
    const std::string csv = (dir.path / "scan.csv").string();
    const std::vector<std::string> args = {"ergodic-scan", "--generator", "horocycle", "--states", "10",
                                           "--horizons", "10,30,100,300", "--n", "20000",
                                           "--format", "csv", "--output", csv};
    const Run r = run(args);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(csv + ".json"));
    for (const auto& e : fs::directory_iterator(dir.path))
        CHECK(e.path().string().find(".tmp.") == std::string::npos);
    CHECK(slurp(csv).rfind("T,sup_error\n", 0) == 0);

    const json side = json::parse(slurp(csv + ".json"));
    const json fit = run_json({"decay-fit", "--input", csv});
    if (side["fit"].contains("theta")) CHECK(fit["theta"] == side["fit"]["theta"]);

    // Rerun: byte-identical output.
    const std::string first = slurp(csv);
    REQUIRE(run(args).code == 0);
    CHECK(slurp(csv) == first);
}

TEST_CASE("seeded subcommands are reproducible across shard counts") {
    const std::vector<std::vector<std::string>> cases = {
        {"haar-sample", "--n", "200", "--seed", "9"},
        {"area-check", "--n", "20000", "--seed", "9"},
        {"flow", "--B", "2", "--E", "3", "--t", "5", "--seed", "9"},
        {"zonal-density", "--n", "100000", "--seed", "9"},
        {"ergodic-scan", "--states", "10", "--horizons", "10,20,40,80", "--n", "20000", "--seed", "9"},
    };
    for (const auto& base : cases) {
        const Run one = run(base);
        REQUIRE(one.code == 0);
        CHECK(run(base).out == one.out);
        for (const char* shards : {"4", "16"}) {
            auto args = base;
            args.push_back("--shards");
            args.push_back(shards);
            const Run r = run(args);
            REQUIRE(r.code == 0);
            CHECK(r.out == one.out);
        }
    }
}

TEST_CASE("csv outputs") {
    const Run h = run({"haar-sample", "--n", "4", "--format", "csv"});
    REQUIRE(h.code == 0);
    CHECK(h.out.rfind("m11,m12,m21,m22,re,im,angle\n", 0) == 0);
    CHECK(std::count(h.out.begin(), h.out.end(), '\n') == 5);

    const Run s = run({"spectra", "--B", "2", "--k", "3", "--format", "csv"});
    REQUIRE(s.code == 0);
    CHECK(s.out.rfind("k,m,numerator,denominator,lambda_float\n", 0) == 0);
    CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 7);
}

}  // TEST_SUITE
