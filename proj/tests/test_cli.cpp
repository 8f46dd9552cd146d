#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "rmlab/report.hpp"

using rmlab::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    json report;
};

std::string binary() {
    const char* b = std::getenv("RMLAB_BIN");
    REQUIRE_MESSAGE(b != nullptr, "RMLAB_BIN must point at the rmlab executable");
    return b;
}

Run run(const std::string& args) {
    Run r;
    std::string cmd = binary() + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
    int status = pclose(f);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.report = json::parse(r.out, nullptr, false);
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("rmlab_cli_test_" + std::to_string(::getpid())) / name;
    std::filesystem::create_directories(d.parent_path());
    return d;
}

}  // namespace

TEST_CASE("invalid instances are rejected before computation with the violated invariant named") {
    auto r = run("gtau --disc 12 --p 5 --form 2,4,-4");
    CHECK(r.code == 2);
    CHECK(r.out.find("not primitive") != std::string::npos);
    r = run("gtau --disc 12 --p 11");
    CHECK(r.code == 2);
    CHECK(r.out.find("inert") != std::string::npos);
    r = run("gtau --disc 9 --p 5");
    CHECK(r.code == 2);
    CHECK(r.out.find("fundamental") != std::string::npos);
    r = run("gtau --disc 12 --p 4");
    CHECK(r.code == 2);
    r = run("gtau --disc 60 --p 5");
    CHECK(r.code == 2);  // p | D
    r = run("gtau --disc 12 --p 5 --form 1,3,-2");
    CHECK(r.code == 2);  // discriminant 17
    r = run("phi-dr --gamma 1,2,3,7");
    CHECK(r.code == 2);  // p does not divide c
    r = run("frobnicate");
    CHECK(r.code == 2);
}

TEST_CASE("trivial instance: certified all-zero series") {
    auto r = run("gtau --disc 5 --p 7 --nmax 12 --depth 1");
    REQUIRE_MESSAGE(!r.report.is_discarded(), r.out);
    CHECK(r.code == 0);
    CHECK(r.report["schema"] == "rmlab/1");
    CHECK(r.report["results"]["has_norm_minus_one"] == true);
    CHECK(r.report["certificates"]["winding_all_zero"]["all_zero"] == true);
    CHECK(r.report["certificates"]["winding_all_zero"]["precision"] == 25);
    CHECK(r.report["results"]["log_u_tau"]["v"].is_null());

    auto d = run("recognize-unit --disc 5 --p 7 --nmax 12 --depth 1");
    CHECK(d.code == 3);
    CHECK(d.report["results"]["degenerate"] == true);
}

TEST_CASE("verify: empty suite list and named suites") {
    auto r = run("verify");
    CHECK(r.code == 0);
    CHECK(r.report["results"].empty());
    r = run("verify --suite measure --suite vanishing --nmax 40 --seed 9");
    REQUIRE_MESSAGE(!r.report.is_discarded(), r.out);
    CHECK(r.code == 0);
    CHECK(r.report["results"]["measure"]["masses_ok"] == true);
    CHECK(r.report["results"]["vanishing"]["characters"][0]["vanishes"] == true);
    r = run("verify --suite bijections --nmax 4");
    CHECK(r.code == 0);
    CHECK(r.report["results"]["bijections"]["rows"].size() == 4);
    r = run("verify --suite nonsense");
    CHECK(r.code == 2);
}

TEST_CASE("phi-dr, jdr and algdep") {
    auto r = run("phi-dr --gamma 1,2,5,11 --level 2");
    REQUIRE_MESSAGE(!r.report.is_discarded(), r.out);
    CHECK(r.code == 0);
    CHECK(r.report["results"]["total_mass"] == 0);
    CHECK(r.report["results"]["mass_pZp_x_Zpx"] == r.report["results"]["phi_DR"]);
    r = run("phi-dr --gamma 1,1,0,1 --p 7 --disc 12 --level 1");
    CHECK(r.report["results"]["phi_DR"] == 12);

    r = run("jdr --level 2 --prec 12");
    CHECK(r.code == 0);
    CHECK(r.report["results"]["total_mass"] == 0);

    r = run("algdep --value 3/7 --deg 2");
    CHECK(r.code == 0);
    CHECK(r.report["results"]["polynomial_str"] == "7x - 3");
    r = run("algdep --value 0,1 --deg 2");  // w, with w^2 = 2 for p = 5
    CHECK(r.report["results"]["polynomial_str"] == "x^2 - 2");
    r = run("algdep --value abc");
    CHECK(r.code == 2);
}

TEST_CASE("report cache: hit returns a byte-identical payload") {
    auto dir = scratch("cache");
    auto out1 = scratch("g1.json"), out2 = scratch("g2.json");
    std::string args = "gtau --disc 12 --p 7 --nmax 12 --depth 1 --diag-nmax 2 --mmax 1 --cache-dir " + dir.string();
    auto a = run(args + " --out " + out1.string());
    auto b = run(args + " --out " + out2.string());
    REQUIRE_MESSAGE(!a.report.is_discarded(), a.out);
    CHECK(a.code == b.code);
    CHECK(b.report["timings"]["cache"] == "hit");
    CHECK_FALSE(a.report["timings"].contains("cache"));
    auto strip = [](json j) {
        j.erase("timings");
        return j.dump();
    };
    CHECK(strip(a.report) == strip(b.report));
    std::ifstream f1(out1), f2(out2);
    json j1 = json::parse(f1), j2 = json::parse(f2);
    CHECK(strip(j1) == strip(j2));
    // a different configuration misses
    auto c = run("gtau --disc 12 --p 7 --nmax 13 --depth 1 --diag-nmax 2 --mmax 1 --cache-dir " + dir.string());
    CHECK_FALSE(c.report["timings"].contains("cache"));
    // entries written by another code version are never read
    {
        std::ifstream in(dir / "reports.jsonl");
        std::string all((std::istreambuf_iterator<char>(in)), {});
        std::string stale;
        std::string line;
        std::istringstream ls(all);
        while (std::getline(ls, line)) {
            auto e = json::parse(line);
            e["version"] = "0.0.0-stale";
            stale += e.dump() + "\n";
        }
        std::ofstream o(dir / "reports.jsonl");
        o << stale;
    }
    auto d = run(args);
    CHECK_FALSE(d.report["timings"].contains("cache"));
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("TOML config file: values apply and flags win") {
    auto cfg = scratch("run.toml");
    {
        std::ofstream o(cfg);
        o << "disc = 5\np = 7\nprec = 15\n";
    }
    auto r = run("--config " + cfg.string() + " phi-dr --gamma 1,0,7,1");
    REQUIRE_MESSAGE(!r.report.is_discarded(), r.out);
    CHECK(r.report["config"]["D"] == 5);
    CHECK(r.report["config"]["p"] == 7);
    CHECK(r.report["config"]["N"] == 15);
    r = run("--config " + cfg.string() + " --p 13 phi-dr --gamma 1,0,13,1");
    CHECK(r.report["config"]["p"] == 13);
    CHECK(r.report["config"]["D"] == 5);
    std::filesystem::remove_all(cfg.parent_path());
}

TEST_CASE("identical configurations give identical payloads across thread counts") {
    auto a = run("winding --disc 12 --p 5 --nmax 15 --depth 2 --threads 1");
    auto b = run("winding --disc 12 --p 5 --nmax 15 --depth 2 --threads 3");
    REQUIRE_MESSAGE(!a.report.is_discarded(), a.out);
    CHECK(a.report["results"] == b.report["results"]);
}
