#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gmpxx.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(SPECPOINT_BIN) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> key_sequence(const std::string& text) {
    std::vector<std::string> keys;
    for (std::size_t i = 0; i + 2 < text.size(); ++i) {
        if (text[i] != '"') continue;
        std::size_t j = text.find('"', i + 1);
        if (j == std::string::npos) break;
        if (j + 1 < text.size() && text[j + 1] == ':') keys.push_back(text.substr(i + 1, j - i - 1));
        i = j;
    }
    return keys;
}

}  // namespace

TEST_CASE("golden: cyclo and bounds outputs are byte-stable") {
    RunResult c8 = run_cli("cyclo --n 8");
    CHECK(c8.exit_code == 0);
    CHECK(c8.out == read_file(std::string(SPECPOINT_GOLDEN) + "/cyclo_8.json"));
    RunResult c12 = run_cli("cyclo --n 12");
    CHECK(c12.exit_code == 0);
    CHECK(c12.out == read_file(std::string(SPECPOINT_GOLDEN) + "/cyclo_12.json"));
    RunResult b = run_cli("bounds --d 1 --dx 1 --dy 2 --height 0");
    CHECK(b.exit_code == 0);
    CHECK(b.out == read_file(std::string(SPECPOINT_GOLDEN) + "/bounds_1_1_2_0.json"));
}

TEST_CASE("classpoly -15 output: values and key order") {
    RunResult r = run_cli("classpoly --disc -15");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["disc"] == -15);
    CHECK(j["class_number"] == 2);
    CHECK(j["coefficients"] == json::array({1, 191025, -121287375}));
    CHECK(j["cert_margin"].get<double>() < 0.25);
    CHECK(key_sequence(r.out) ==
          std::vector<std::string>{"disc", "class_number", "coefficients", "cert_margin"});
}

TEST_CASE("solve JSON: schema and content for the 1727 curve") {
    RunResult r = run_cli("solve --poly \"X + Y^2 - 1727\"");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["special_points"].size() == 1);
    const auto& p = j["special_points"][0];
    CHECK(p["N"] == 4);
    CHECK(p["disc"] == -4);
    CHECK(p["factor"] == json::array({1, -1728}));
    CHECK(p["exact"] == true);
    REQUIRE(p["pairs"].size() == 2);
    CHECK(p["pairs"][0]["lambda_exponent"] == 1);
    CHECK(p["pairs"][1]["lambda_exponent"] == 3);
    CHECK(j["undecided"].empty());
    auto keys = key_sequence(r.out);
    std::vector<std::string> head{"curve", "poly", "d", "delta1", "delta2", "h", "big_h",
                                  "bounds", "a", "n_candidates", "n_cap", "delta_cap",
                                  "delta_cap_used", "delta_cap_overridden", "special_points"};
    REQUIRE(keys.size() >= head.size());
    for (std::size_t i = 0; i < head.size(); ++i) CHECK(keys[i] == head[i]);
    // Determinism across runs.
    RunResult r2 = run_cli("solve --poly \"X + Y^2 - 1727\"");
    CHECK(r2.out == r.out);
    RunResult r4 = run_cli("solve --poly \"X + Y^2 - 1727\" --threads 2");
    CHECK(r4.out == r.out);
}

TEST_CASE("solve over a quadratic field via --field") {
    RunResult r = run_cli("solve --poly \"X + T*Y\" --field \"T^2 - 2\" --delta-cap 500");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["curve"]["poly"] == "X^2 - 2*Y^2");
    CHECK(j["curve"]["d"] == 2);
}

TEST_CASE("exit code contract") {
    // 0: success
    CHECK(run_cli("cyclo --n 1").exit_code == 0);
    // 1: mathematical rejection
    CHECK(run_cli("solve --poly \"(X-1)*(Y-1)\"").exit_code == 1);
    CHECK(run_cli("solve --poly \"X^2\"").exit_code == 1);
    CHECK(run_cli("classpoly --disc -5").exit_code == 1);
    CHECK(run_cli("classpoly --disc 4").exit_code == 1);
    // 2: usage errors
    CHECK(run_cli("solve --poly \"2X\"").exit_code == 2);
    CHECK(run_cli("solve --poly \"X + Q\"").exit_code == 2);
    CHECK(run_cli("nosuchcommand").exit_code == 2);
    CHECK(run_cli("cyclo").exit_code == 2);
    CHECK(run_cli("verify --check no-such").exit_code == 1);
    // Overrides beyond the hard recognition ceiling are a usage error.
    CHECK(run_cli("solve --poly \"X*Y - 1\" --delta-cap 1000000000000000").exit_code == 2);
}

TEST_CASE("undecided roots exit with code 3 under a tight precision cap") {
    // Two roots separated by ~2^-300 cannot be resolved at 256 bits.
    mpz_class big = mpz_class(1) << 600;
    std::string poly = big.get_str() + "*(X - 5)^2*Y - Y - 1";
    RunResult r = run_cli("solve --poly \"" + poly + "\" --delta-cap 1000",
                          "SPECPOINT_PRECISION_CAP=256");
    CHECK(r.exit_code == 3);
    json j = json::parse(r.out);
    CHECK(j["undecided"].size() > 0);
    // With the default cap the same curve resolves cleanly.
    RunResult ok = run_cli("solve --poly \"" + poly + "\" --delta-cap 1000");
    CHECK(ok.exit_code == 0);
    CHECK(json::parse(ok.out)["undecided"].empty());
}

TEST_CASE("missing delta-cap override for an oversized theorem cap") {
    // Height pushes the theorem cap beyond 2^34: requires --delta-cap.
    mpz_class c = mpz_class(1) << 120;
    std::string poly = "X + Y^2 - " + c.get_str();
    RunResult r = run_cli("solve --poly \"" + poly + "\"");
    CHECK(r.exit_code == 2);
    RunResult r2 = run_cli("solve --poly \"" + poly + "\" --delta-cap 10000");
    CHECK(r2.exit_code == 0);
}

TEST_CASE("table renderer smoke") {
    RunResult r = run_cli("solve --poly \"X + Y^2 - 1727\" --table");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("N") != std::string::npos);
    CHECK(r.out.find("-4") != std::string::npos);
    CHECK(r.out.find("X - 1728") != std::string::npos);
}

TEST_CASE("verify subcommand JSON") {
    RunResult r = run_cli("verify --check unit-squares --max-n 500");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["check"] == "unit-squares");
    CHECK(j["pass"] == true);
    CHECK(j["counterexamples"].empty());
    CHECK(j.contains("elapsed_seconds"));
}
