// End-to-end checks of the torick binary: exit-code contract, schema
// errors, determinism of reports, and agreement between the shipped
// fixture files and the in-memory fixtures the unit suites use.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "support/fixtures.hpp"
#include "torick/io.hpp"

#ifndef TORICK_BIN
#error "TORICK_BIN must point at the CLI binary"
#endif
#ifndef TORICK_FIXTURE_DIR
#error "TORICK_FIXTURE_DIR must point at the fixture directory"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args) {
    static int counter = 0;
    std::string out = "/tmp/torick_out_" + std::to_string(counter) + ".txt";
    std::string err = "/tmp/torick_err_" + std::to_string(counter) + ".txt";
    ++counter;
    std::string cmd = std::string(TORICK_BIN) + " " + args + " > " + out + " 2> " + err;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    std::remove(out.c_str());
    std::remove(err.c_str());
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(TORICK_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("df on the product fixture") {
    auto r = run("df " + fixture("p1xp1.model"));
    REQUIRE(r.exit_code == 0);
    auto j = torick::Json::parse(r.out);
    CHECK(j["schema"] == "torick/1");
    CHECK(j["DF"]["coeffs"][0] == "0");
    CHECK(j["term1"]["coeffs"][0] == "-4");
    CHECK(j["df_sign"] == 0);
}

TEST_CASE("volume: worked values and homogeneity through a scaled file") {
    auto r = run("volume " + fixture("p1xp1.model"));
    REQUIRE(r.exit_code == 0);
    CHECK(torick::Json::parse(r.out)["V"]["coeffs"][0] == "2");

    // triple the polarization in a temporary copy
    auto j = torick::load_json_file(fixture("p1xp1.model"));
    for (auto& c : j["polarization"]["coeffs"]) {
        auto v = torick::parse_rational(c.get<std::string>()) * 3;
        c = torick::rational_to_string(v);
    }
    std::ofstream("/tmp/p1xp1_tripled.model") << j.dump(2);
    auto r3 = run("volume /tmp/p1xp1_tripled.model");
    REQUIRE(r3.exit_code == 0);
    CHECK(torick::Json::parse(r3.out)["V"]["coeffs"][0] == "6");

    // dim F = 0 fixture reports the plain top self-intersection
    auto ra = run("volume " + fixture("a1-crepant.model"));
    REQUIRE(ra.exit_code == 0);
    CHECK(torick::Json::parse(ra.out)["V"]["coeffs"][0] == "-1/2");
}

TEST_CASE("df --derivative-check passes on the degeneration fixture") {
    auto r = run("df " + fixture("dnc-p2.model") + " --derivative-check");
    REQUIRE(r.exit_code == 0);
    auto j = torick::Json::parse(r.out);
    CHECK(j["derivative_check_ok"] == true);
    CHECK(j["DF"]["coeffs"][0] == "3/4");
}

TEST_CASE("path command emits a nonincreasing CSV for the canonical direction") {
    auto r = run("path " + fixture("dnc-p2.model") + " canonical --samples 6 --out /tmp/dnc.csv");
    REQUIRE(r.exit_code == 0);
    auto j = torick::Json::parse(r.out);
    CHECK(j["t_max"] == "1");
    CHECK(j["derivative_nonpositive"] == true);

    std::ifstream csv("/tmp/dnc.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,DF,dDF_sign");
    double prev = 1e18;
    int rows = 0;
    while (std::getline(csv, line)) {
        auto c1 = line.find(','), c2 = line.rfind(',');
        double df = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        int sign = std::stoi(line.substr(c2 + 1));
        CHECK(df <= prev);
        CHECK(sign <= 0);
        prev = df;
        ++rows;
    }
    CHECK(rows == 7);

    auto rz = run("path " + fixture("p1xp1.model") + " zero");
    REQUIRE(rz.exit_code == 0);
    CHECK(torick::Json::parse(rz.out)["t_max"].is_null());
}

TEST_CASE("classify command on the three cones") {
    CHECK(torick::Json::parse(run("classify " + fixture("a1.cone")).out)["type"] ==
          "canonical-not-terminal");
    CHECK(torick::Json::parse(run("classify " + fixture("q3.cone")).out)["type"] ==
          "not-canonical");
    CHECK(torick::Json::parse(run("classify " + fixture("smooth.cone")).out)["type"] ==
          "terminal");
}

TEST_CASE("search finds the q3 witness already at bound 1") {
    auto r = run("search " + fixture("q3.cone") + " --bound 1");
    REQUIRE(r.exit_code == 0);
    auto j = torick::Json::parse(r.out);
    CHECK(j["negative_found"] == true);
    CHECK(torick::parse_rational(j["best"]["DF"].get<std::string>()) < 0);
}

TEST_CASE("pullback-check exit codes") {
    CHECK(run("pullback-check " + fixture("p1xp1.model") + " --trials 4").exit_code == 0);
    CHECK(run("pullback-check " + fixture("p1xp1.model") + " --trials 0").exit_code == 0);
    CHECK(run("pullback-check " + fixture("p1xp1.model") + " --trials 3 --inject-corruption")
              .exit_code == 4);
}

TEST_CASE("schema and precondition errors map to the exit-code contract") {
    CHECK(run("df /nonexistent.model").exit_code == 2);
    std::ofstream("/tmp/bad.model") << "{ not json";
    CHECK(run("df /tmp/bad.model").exit_code == 2);
    std::ofstream("/tmp/empty.model") << "{}";
    CHECK(run("df /tmp/empty.model").exit_code == 2);

    // negative of an ample polarization is not relatively nef: exit 3
    auto j = torick::load_json_file(fixture("p1xp1.model"));
    for (auto& c : j["polarization"]["coeffs"]) {
        auto v = torick::parse_rational(c.get<std::string>()) * -1;
        c = torick::rational_to_string(v);
    }
    std::ofstream("/tmp/negative.model") << j.dump(2);
    CHECK(run("df /tmp/negative.model").exit_code == 3);

    // derivative check on a generically finite model: precondition failure
    CHECK(run("df " + fixture("a1-crepant.model") + " --derivative-check").exit_code == 3);
}

TEST_CASE("reports are byte-identical across runs") {
    for (std::string cmd :
         {std::string("df ") + fixture("dnc-p2.model"),
          std::string("pullback-check ") + fixture("mult2.model") + " --trials 4 --seed 1729",
          std::string("search ") + fixture("a1.cone") + " --bound 2"}) {
        auto a = run(cmd);
        auto b = run(cmd);
        REQUIRE(a.exit_code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("TORICK_FIXTURES resolves bare fixture names") {
    std::string cmd = "TORICK_FIXTURES=" + std::string(TORICK_FIXTURE_DIR) + " " +
                      std::string(TORICK_BIN) + " volume p2xp1.model > /tmp/envout.txt 2>&1";
    int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
}

TEST_CASE("fixture files agree with the in-memory models") {
    auto compare = [&](const std::string& file, const torick::FiberedModel& mem) {
        auto m = torick::model_from_json(torick::load_json_file(fixture(file)), "x");
        CHECK(m.total()->rays() == mem.total()->rays());
        CHECK(m.total()->max_cones() == mem.total()->max_cones());
        CHECK(m.base()->rays() == mem.base()->rays());
        CHECK(m.polarization().coeffs() == mem.polarization().coeffs());
        CHECK(m.projection() == mem.projection());
        CHECK(m.base_ray_p() == mem.base_ray_p());
    };
    compare("p1xp1.model", torick_test::p1xp1_model());
    compare("p2xp1.model", torick_test::p2xp1_model());
    compare("dnc-p2.model", torick_test::dnc_p2_model());
    compare("mult2.model", torick_test::mult2_model());
    compare("a1-crepant.model", torick_test::a1_crepant_model());
    compare("quadric-p2.model", torick_test::quadric_p2_model());
}
