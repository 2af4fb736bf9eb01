#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

// SGFORMS_BIN is injected by the build as the path of the sgforms binary.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Callers may embed their own shell redirections; otherwise stderr is dropped.
RunResult run(const std::string& args) {
    const bool has_redirect = args.find('>') != std::string::npos;
    const std::string cmd =
        std::string(SGFORMS_BIN) + " " + args + (has_redirect ? "" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("kusuoka level 1") {
    const RunResult r = run("kusuoka --level 1");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["level"] == 1);
    CHECK(j["total"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    REQUIRE(j["cells"].size() == 3);
    for (const auto& w : {"0", "1", "2"})
        CHECK(j["cells"][w].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ftli along the bottom is exact") {
    const RunResult r = run("ftli --f x --path bottom --refine 3");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["integral"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["estimated_error"].get<double>() <= 1e-12);
    CHECK(j["endpoint_difference"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zfield rows have unit trace") {
    const RunResult csv = run("--format csv zfield --level 1");
    REQUIRE(csv.exit_code == 0);
    int rows = 0;
    size_t pos = csv.out.find('\n') + 1;  // skip header
    while (pos < csv.out.size()) {
        const size_t end = csv.out.find('\n', pos);
        const std::string line = csv.out.substr(pos, end - pos);
        double nu, z11, z12, z22;
        char w;
        REQUIRE(std::sscanf(line.c_str(), "%c,%lf,%lf,%lf,%lf", &w, &nu, &z11, &z12, &z22) == 5);
        CHECK(z11 + z22 == doctest::Approx(1.0).epsilon(1e-12));
        ++rows;
        pos = end + 1;
    }
    CHECK(rows == 3);

    const RunResult js = run("zfield --level 1");
    REQUIRE(js.exit_code == 0);
    const auto j = nlohmann::json::parse(js.out);
    for (const auto& cell : j["cells"]) {
        const auto z = cell["z"];
        CHECK(z[0].get<double>() + z[2].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("integral of an exact form between explicit vertices") {
    // y dx + x dy = d(xy) from q0 to the bottom midpoint: endpoint value
    // (1/2)(sqrt(3)/10)
    const RunResult r = run("integrate --wx y --wy x --path :0,0:1 --level 1 --refine 4");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["integral"].get<double>() ==
          doctest::Approx(0.5 * std::sqrt(3.0) / 10).epsilon(1e-9));
}

TEST_CASE("distance output shape") {
    const RunResult r = run("distance --from q0 --to q1 --level 2");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["level"] == 2);
    CHECK(j["lower"].get<double>() > 1.0);
    CHECK(j["lower"].get<double>() <= j["upper"].get<double>() + 1e-9);
}

TEST_CASE("usage errors exit 2 with machine-parsable stderr") {
    CHECK(run("nonsense").exit_code == 2);
    CHECK(run("kusuoka").exit_code == 2);  // missing --level

    // stderr onto the pipe, stdout discarded
    const RunResult r = run("energy --f \"x^\" --level 2 2>&1 1>/dev/null");
    CHECK(r.exit_code == 2);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["error"]["code"] == "expr-parse");

    const RunResult cap = run("gasket --level 13 2>&1 1>/dev/null");
    CHECK(cap.exit_code == 2);
    CHECK(nlohmann::json::parse(cap.out)["error"]["code"] == "resource-limit");
}

TEST_CASE("runs are deterministic") {
    const RunResult a = run("energy --f \"sin(x)*y\" --level 3");
    const RunResult b = run("energy --f \"sin(x)*y\" --level 3");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const RunResult c = run("distance --from q0 --to q2 --level 2");
    const RunResult d = run("distance --from q0 --to q2 --level 2");
    REQUIRE(c.exit_code == 0);
    CHECK(c.out == d.out);
}
