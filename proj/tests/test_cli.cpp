#include <catch2/catch_amalgamated.hpp>

#include "rham/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult call(std::vector<std::string> args) {
    std::ostringstream o, e;
    int c = rham::cli::run(std::move(args), o, e);
    return {c, o.str(), e.str()};
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

std::string temp_file(const std::string& stem) {
    return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("cli list prints the registry in order") {
    CliResult r = call({"list"});
    CHECK(r.code == 0);
    CHECK(r.out == "reduced_three_wave\nrabinovich\nchen\nlu\nmodified_lu\nqi\n"
                   "rlc_circuit\neuler_rotor\neuler_rotor_dissipative\n");
}

TEST_CASE("cli describe serializes one system per field line") {
    CliResult r = call({"describe", "chen"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 8);
    CHECK(r.out.find("name: chen\n") != std::string::npos);
    CHECK(r.out.find("dimension: 3\n") != std::string::npos);
    CHECK(r.out.find("params: a=35, b=3, g=28\n") != std::string::npos);
    CHECK(r.out.find("H: 1/2*x^2 - a*z\n") != std::string::npos);

    // aliases resolve
    CliResult a = call({"describe", "three_wave"});
    CHECK(a.out.find("name: reduced_three_wave\n") != std::string::npos);

    CliResult bad = call({"describe", "nosuch"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("unknown system 'nosuch'") != std::string::npos);
}

TEST_CASE("cli verify chen emits the documented check lines") {
    CliResult r = call({"verify", "chen"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS jacobi.J") != std::string::npos);
    CHECK(r.out.find("PASS rhs.match") != std::string::npos);
    CHECK(r.out.find("PASS div.match value=-a-b+g") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("cli verify qi reports the expected-nonzero classification") {
    CliResult r = call({"verify", "qi"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS jacobi.J") != std::string::npos);
    CHECK(r.out.find("INFO n.jacobi nonzero") != std::string::npos);
    CHECK(r.out.find("PASS n.class not poisson (generic)") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("cli verify all covers every system and passes") {
    CliResult r = call({"verify", "all"});
    CHECK(r.code == 0);
    std::size_t banners = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# system: ", 0) == 0) ++banners;
    CHECK(banners == 9);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("exactness.closedform") != std::string::npos);
    CHECK(r.out.find("factorize.euler") != std::string::npos);
}

TEST_CASE("cli verify --symbolic skips float sampling") {
    CliResult r = call({"verify", "reduced_three_wave", "--symbolic"});
    CHECK(r.code == 0);
    CHECK(r.out.find("max_err") == std::string::npos);
    CHECK(r.out.find("INFO exactness.closedform numeric check skipped") !=
          std::string::npos);

    CliResult full = call({"verify", "reduced_three_wave"});
    CHECK(full.out.find("max_err") != std::string::npos);
}

TEST_CASE("cli verify with pinned parameters restricts to structural checks") {
    CliResult r = call({"verify", "chen", "--param", "a=1", "--param", "g=1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS n.jacobi residual=0") != std::string::npos);
    CHECK(r.out.find("n.class") == std::string::npos);

    CliResult generic = call({"verify", "chen", "--param", "a=2", "--param", "g=1"});
    CHECK(generic.out.find("INFO n.jacobi nonzero") != std::string::npos);
}

TEST_CASE("cli verify rejects malformed parameter bindings") {
    CHECK(call({"verify", "chen", "--param", "zz=1"}).code == 2);
    CHECK(call({"verify", "chen", "--param", "a"}).code == 2);
    CHECK(call({"verify", "chen", "--param", "x=1"}).code == 2);
    CHECK(call({"verify", "nosuch"}).code == 2);
}

TEST_CASE("cli simulate writes the documented csv header") {
    std::string path = temp_file("rham_cli_test.csv");
    CliResult r = call({"simulate", "euler_rotor", "--x0", "1,1,1", "--t1", "1",
                        "--out", path});
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,x,y,z,H,div,energy_rate_residual");
    std::remove(path.c_str());
}

TEST_CASE("cli simulate json echoes the config and keeps div constant") {
    std::string path = temp_file("rham_cli_test.json");
    CliResult r = call({"simulate", "chen", "--x0", "1,1,1", "--t1", "1", "--format",
                        "json", "--out", path});
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    auto j = nlohmann::json::parse(f);
    CHECK(j["config"]["method"] == "rk4");
    CHECK(j["config"]["step"] == 1e-3);
    CHECK(j["config"]["param_bindings"]["a"] == 35.0);
    REQUIRE(j["channels"].contains("div"));
    auto div = j["channels"]["div"];
    for (const auto& v : div) CHECK(double(v) == double(div[0]));
    CHECK(j["diverged"] == false);
    std::remove(path.c_str());
}

TEST_CASE("cli simulate accepts rk45 and rational parameter values") {
    std::string path = temp_file("rham_cli_rk45.csv");
    CliResult r = call({"simulate", "rlc_circuit", "--x0", "1,0,0", "--t1", "1",
                        "--method", "rk45", "--param", "R=1/2", "--out", path});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(path));
    std::remove(path.c_str());
}

TEST_CASE("cli simulate flags divergence with a partial trajectory") {
    std::string path = temp_file("rham_cli_div.csv");
    CliResult r = call({"simulate", "qi", "--x0", "1e6,1e6,1e6", "--dt", "0.01",
                        "--t1", "10", "--out", path});
    CHECK(r.code == 1);
    CHECK(r.err.find("diverged") != std::string::npos);
    CHECK(std::filesystem::exists(path));
    std::remove(path.c_str());
}

TEST_CASE("cli simulate input errors exit with code 2") {
    CHECK(call({"simulate", "nosuch", "--x0", "1,1,1", "--out", "/tmp/x.csv"}).code == 2);
    CHECK(call({"simulate", "chen", "--x0", "1,1", "--out", "/tmp/x.csv"}).code == 2);
    CHECK(call({"simulate", "chen", "--x0", "1,1,oops", "--out", "/tmp/x.csv"}).code == 2);
    CHECK(call({"simulate", "chen", "--x0", "1,1,1", "--out",
                "/nonexistent-dir/x.csv"}).code == 2);
    CHECK(call({"simulate", "chen", "--x0", "1,1,1", "--method", "euler", "--out",
                "/tmp/x.csv"}).code == 2);
}

TEST_CASE("cli derive biham emits the cascade flow for the three wave pair") {
    CliResult r = call({"derive", "three_wave", "--kind", "biham", "--G", "x^2+y^2+z"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# source=reduced_three_wave\n") != std::string::npos);
    CHECK(r.out.find("dx/dt = 2*g*y^2 - d*g*y + 2*z^2 - 1/2*g*z\n") != std::string::npos);
    CHECK(r.out.find("dy/dt = -2*g*x*y + d*g*x\n") != std::string::npos);
    CHECK(r.out.find("dz/dt = -4*x*z^2 + g*x*z\n") != std::string::npos);
    CHECK(r.out.find("# Gbar=|2*y - d|^") != std::string::npos);
    CHECK(r.out.find("# M=(4*lam/g)") != std::string::npos);
}

TEST_CASE("cli derive jordan at delta 1 is byte identical to biham") {
    CliResult biham = call({"derive", "three_wave", "--kind", "biham"});
    CliResult jordan = call({"derive", "three_wave", "--kind", "jordan", "--delta", "1"});
    REQUIRE(biham.code == 0);
    REQUIRE(jordan.code == 0);
    CHECK(biham.out == jordan.out);
}

TEST_CASE("cli derive jordan without delta keeps the family symbolic") {
    CliResult r = call({"derive", "three_wave", "--kind", "jordan"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("D") != std::string::npos);
    CHECK(r.out.find("s") != std::string::npos);
    CHECK(r.out.find("# Gbar=none\n") != std::string::npos);

    CliResult tilt = call({"derive", "three_wave", "--kind", "jordan", "--delta", "3/5"});
    REQUIRE(tilt.code == 0);
    CHECK(tilt.out.find("4/5") != std::string::npos);
}

TEST_CASE("cli derive certificates for lu and the dissipative rotor") {
    CliResult lu = call({"derive", "lu", "--kind", "biham"});
    REQUIRE(lu.code == 0);
    CHECK(lu.out.find("# Gbar=none\n") != std::string::npos);

    CliResult rot = call({"derive", "euler_rotor_dissipative", "--kind", "biham"});
    REQUIRE(rot.code == 0);
    CHECK(rot.out.find("# Gbar=x^2 + y^2 + z^2\n") != std::string::npos);
    CHECK(rot.out.find("# M=2\n") != std::string::npos);
}

TEST_CASE("cli derive conformal prints the constrained splitting") {
    CliResult r = call({"derive", "chen", "--kind", "conformal"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# constraint=b = a, g = -a\n") != std::string::npos);
    CHECK(r.out.find("# a=-a\n") != std::string::npos);
    CHECK(r.out.find("dz/dt = x*y - a*z\n") != std::string::npos);

    CliResult none = call({"derive", "rabinovich", "--kind", "conformal"});
    CHECK(none.code == 1);
    CHECK(none.err.find("no conformal decomposition") != std::string::npos);
}

TEST_CASE("cli derive error paths") {
    CliResult qi = call({"derive", "qi", "--kind", "biham"});
    CHECK(qi.code == 1);
    CHECK(qi.err.find("does not induce a Poisson structure") != std::string::npos);

    CHECK(call({"derive", "three_wave", "--kind", "jordan", "--delta", "1/2"}).code == 2);
    CHECK(call({"derive", "three_wave", "--kind", "biham", "--G", "x^2+)"}).code == 2);
    CHECK(call({"derive", "chen", "--kind", "biham", "--delta", "1"}).code == 2);
    CHECK(call({"derive", "chen", "--kind", "conformal", "--G", "z"}).code == 2);
    CHECK(call({"derive", "chen", "--kind", "nope"}).code == 2);
    CHECK(call({"derive", "nosuch", "--kind", "biham"}).code == 2);
}

TEST_CASE("cli report prints the aligned status matrix") {
    CliResult r = call({"report"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("system", 0) == 0);
    CHECK(header.find("jacobi.J") != std::string::npos);
    CHECK(header.find("factorize.euler") != std::string::npos);
    CHECK(count_lines(r.out) == 10);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("euler_rotor_dissipative") != std::string::npos);
    // absent checks are dashes, e.g. conformal columns for rabinovich
    CHECK(r.out.find("-") != std::string::npos);
}

TEST_CASE("cli usage and unknown input handling") {
    CHECK(call({"--help"}).code == 0);
    CHECK(call({"--help"}).out.find("Usage:") != std::string::npos);
    CHECK(call({}).code == 0);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"verify"}).code == 2);
    CHECK(call({"verify", "chen", "--frob"}).code == 2);
}
