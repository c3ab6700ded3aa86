#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace stablehcm::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run_args(std::vector<std::string> args) {
    std::vector<char*> argv{const_cast<char*>("stablehcm")};
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse happy path") {
    auto r = parse_args({"theta", "--alpha", "0.4", "--rmin", "1e-4", "--rmax", "1e4", "--n", "200", "--format", "csv"});
    REQUIRE(r.config);
    CHECK(r.config->command == Command::Theta);
    CHECK(r.config->alpha() == 0.4);
    CHECK(r.config->theta_n == 200);
    CHECK(r.config->format == "csv");
    auto e = parse_args({"eval", "--alpha", "0.3", "--xmin", "1", "--xmax", "5", "--count", "3", "--spacing", "linear"});
    REQUIRE(e.config);
    auto pts = e.config->grid.points();
    CHECK(pts == std::vector<double>{1, 3, 5});
    CHECK(parse_args({"classify", "--alpha", "0.2", "0.4"}).config->alphas.size() == 2);
    CHECK(parse_args({"sample", "--alpha", "0.4", "--seed", "5"}).config->seed == 5u);
}

TEST_CASE("usage errors name the token") {
    try {
        parse_args({"eval", "--alpha", "1.2"});
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
    }
    try {
        parse_args({"eval", "--alpha", "0.5", "--bogus"});
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("--bogus") != std::string::npos);
    }
    try {
        parse_args({"eval", "--alpha", "abc"});
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("abc") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_args({"eval", "--alpha", "0.5", "--xmin", "3", "--xmax", "1"}), UsageError);
    CHECK_THROWS_AS(parse_args({"eval", "--alpha", "0.5", "--rel-tol", "-1"}), UsageError);
    CHECK_THROWS_AS(parse_args({}), UsageError);
}

TEST_CASE("exit codes and outputs") {
    auto e = run_args({"eval", "--alpha", "0.5", "--x", "1"});
    CHECK(e.code == 0);
    CHECK(e.out.rfind("x,G\n1,0.2196956447338", 0) == 0);

    auto c = run_args({"classify", "--alpha", "0.25"});
    CHECK(c.code == 0);
    auto j = nlohmann::json::parse(c.out);
    CHECK(j["verdict"] == "Neither");
    CHECK(j["schema_version"] == 1);

    auto t = run_args({"classify", "--alpha", "0.4", "0.7", "--format", "csv"});
    CHECK(t.out.rfind("alpha,verdict,margin,extrema\n", 0) == 0);

    auto h = run_args({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("--alpha") != std::string::npos);
    CHECK(h.out.find("--seed") != std::string::npos);

    auto none = run_args({});
    CHECK(none.code == 1);
    CHECK(none.err.find("usage") != std::string::npos);

    auto bad = run_args({"eval", "--alpha", "1.2"});
    CHECK(bad.code == 1);
    CHECK(bad.err.rfind("error kind=usage", 0) == 0);

    auto dom = run_args({"eval", "--alpha", "0.4", "--gamma", "0.3", "--x", "1"});
    CHECK(dom.code == 1);
    CHECK(dom.err.rfind("error kind=domain", 0) == 0);

    auto v = run_args({"verify", "--alpha", "0.4", "--suite", "roundtrip"});
    CHECK(v.code == 0);
    CHECK(v.out.rfind("PASS roundtrip", 0) == 0);
}

TEST_CASE("violations exit with 2") {
    auto r = run_args({"envelope", "--alpha", "0.4", "--count", "5", "--xmin", "1e-3", "--xmax", "1e3"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["envelope"]["ok"] == true);
    auto n = run_args({"theta", "--alpha", "0.4", "--max-subdivisions", "1"});
    CHECK(n.code == 2);
    CHECK(n.err.rfind("error kind=numerical", 0) == 0);
}

TEST_CASE("deterministic atomic files") {
    auto dir = fs::temp_directory_path() / ("stablehcm_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    ::setenv("STABLEHCM_OUTPUT_DIR", dir.c_str(), 1);
    auto a = run_args({"sample", "--alpha", "0.4", "--n", "200", "--seed", "3", "--out", "a.csv"});
    auto b = run_args({"sample", "--alpha", "0.4", "--n", "200", "--seed", "3", "--out", "b.csv"});
    ::unsetenv("STABLEHCM_OUTPUT_DIR");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(a.out.empty());
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv").rfind("x\n", 0) == 0);
    int files = 0;
    for (auto& e : fs::directory_iterator(dir)) {
        ++files;
        CHECK(e.path().string().find(".tmp.") == std::string::npos);
    }
    CHECK(files == 2);
    auto t1 = run_args({"theta", "--alpha", "0.3", "--format", "json"});
    auto t2 = run_args({"theta", "--alpha", "0.3", "--format", "json"});
    CHECK(t1.out == t2.out);
    fs::remove_all(dir);
}

}
