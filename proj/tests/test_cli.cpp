#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bgeo/domain.hpp"
#include "bgeo/error.hpp"
#include "bgeo/util.hpp"

using namespace bgeo;

TEST_CASE("complex literal grammar") {
    CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
    CHECK(parse_complex("-0.25") == cplx(-0.25, 0.0));
    CHECK(parse_complex("2i") == cplx(0.0, 2.0));
    CHECK(parse_complex("-0.5i") == cplx(0.0, -0.5));
    CHECK(parse_complex("1+2i") == cplx(1.0, 2.0));
    CHECK(parse_complex("1-2i") == cplx(1.0, -2.0));
    CHECK(parse_complex("-1.25e-3+0.5i") == cplx(-1.25e-3, 0.5));
    CHECK(parse_complex("0.3+0.4i") == cplx(0.3, 0.4));

    CHECK_THROWS_AS(parse_complex(""), Error);
    CHECK_THROWS_AS(parse_complex("1 + 2i"), Error);  // whitespace forbidden
    CHECK_THROWS_AS(parse_complex("1+2"), Error);
    CHECK_THROWS_AS(parse_complex("abc"), Error);
    CHECK_THROWS_AS(parse_complex("1+2j"), Error);
}

TEST_CASE("complex vectors") {
    CVec v = parse_complex_vector("0.5,1-2i,-3i");
    REQUIRE(v.size() == 3);
    CHECK(v(0) == cplx(0.5, 0.0));
    CHECK(v(1) == cplx(1.0, -2.0));
    CHECK(v(2) == cplx(0.0, -3.0));
    CHECK_THROWS_AS(parse_complex_vector("1,,2"), Error);
}

TEST_CASE("format round trip at 17 significant digits") {
    for (double x : {1.0 / 3.0, kPi, -2.2250738585072014e-308, 0.1, 123456.789}) {
        double back = std::strtod(format_double(x).c_str(), nullptr);
        CHECK(back == x);
    }
    cplx z(0.1, -1.0 / 3.0);
    cplx back = parse_complex(format_complex(z));
    CHECK(back == z);
}

TEST_CASE("domain JSON round trip") {
    for (const Domain& dom :
         {Domain::disk(), Domain::ball(3), Domain::polydisc(2), Domain::annulus(0.25),
          Domain::product({Domain::annulus(0.1), Domain::disk()})}) {
        Domain back = Domain::from_json(dom.to_json());
        CHECK(back.kind == dom.kind);
        CHECK(back.n == dom.n);
        CHECK(back.r == dom.r);
        CHECK(back.to_json() == dom.to_json());
    }
    CHECK_THROWS(Domain::parse(R"({"type":"annulus","r":1.5})"));
    CHECK_THROWS(Domain::parse(R"({"type":"pretzel"})"));
}

#ifdef BGEO_CLI_PATH

namespace {

struct CmdResult {
    int exit_code;
    std::string output;
};

CmdResult run_cli(const std::string& args) {
    std::string cmd = std::string(BGEO_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("cli exit codes") {
    CHECK(run_cli("annulus-roots --r 0.1").exit_code == 0);
    CHECK(run_cli("annulus-roots").exit_code == 2);        // missing required option
    CHECK(run_cli("annulus-roots --r 2.0").exit_code == 2);  // invalid radius
    CHECK(run_cli("verify --suite annulus-roots").exit_code == 0);
    CHECK(run_cli("verify --suite no-such-suite").exit_code == 2);
}

TEST_CASE("cli json output parses and is seeded-deterministic") {
    auto a = run_cli("verify --suite elliptic --seed 123");
    auto b = run_cli("verify --suite elliptic --seed 123");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    nlohmann::json j = nlohmann::json::parse(a.output);
    CHECK(j["seed"] == 123);
    CHECK(j["passed"] == true);
}

TEST_CASE("geodesic CSV trace reloads to the same terminal point") {
    std::string csv_path = "geodesic_trace_test.csv";
    auto res = run_cli("geodesic --domain '{\"type\":\"disk\"}' --p 0.5+0i "
                       "--v0 0.2+0.1i --tmax 1.0 --emit " + csv_path);
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.output);
    double ze_re = j["z_end"][0][0].get<double>();
    double ze_im = j["z_end"][0][1].get<double>();

    std::ifstream in(csv_path);
    REQUIRE(in.good());
    std::string header, line, last;
    std::getline(in, header);
    CHECK(header == "t,Rez1,Imz1,Rev1,Imv1");
    while (std::getline(in, line)) {
        if (!line.empty()) last = line;
    }
    std::stringstream ss(last);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(row.size() == 5);
    // 17 significant digits round-trip bit-identically
    CHECK(row[1] == ze_re);
    CHECK(row[2] == ze_im);
    std::remove(csv_path.c_str());
}

TEST_CASE("config file feeds tolerances, flags win") {
    std::string cfg_path = "bgeo_cfg_test.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"seed": 99, "tolerances": {"pole_guard": 1e-3}})";
    }
    // pole_guard 1e-3 rejects u this close to the lattice
    auto strict = run_cli("--config " + cfg_path + " elliptic --r 0.1 --u 1e-4+0i");
    CHECK(strict.exit_code == 2);
    // flag overrides the config file
    auto loose = run_cli("--config " + cfg_path +
                         " --pole-guard 1e-8 elliptic --r 0.1 --u 1e-4+0i");
    CHECK(loose.exit_code == 0);
    std::remove(cfg_path.c_str());
}

#endif  // BGEO_CLI_PATH
