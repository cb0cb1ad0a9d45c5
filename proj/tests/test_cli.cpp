#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "kld/cli.hpp"
#include "kld/io.hpp"

using namespace kld;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "kld_cli_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("construct and verify") {
    const auto b33 = scratch("b33.fam");
    auto r = run({"construct", "hls", "--k", "3", "--ell", "4", "--out", b33});
    CHECK(r.code == 0);
    CHECK(load_family(b33).types.size() == 3);
    CHECK(run({"verify", b33}).code == 0);

    const auto lr = scratch("lr57.fam");
    CHECK(run({"construct", "local-replacement", "--k", "5", "--ell", "7", "--out", lr}).code == 0);
    CHECK(load_family(lr).types.size() == 7);

    auto stable = run({"construct", "stable", "--k", "9", "--ell", "20"});
    CHECK(stable.code == 2);
    CHECK(stable.err.find("\xE2\x84\x93 \xE2\x89\xA1 \xC2\xB1" "2 (mod k)") != std::string::npos);

    const auto s922 = scratch("s922.fam");
    CHECK(run({"construct", "stable", "--k", "9", "--ell", "22", "--out", s922}).code == 0);
    CHECK(run({"verify", "--stable", s922}).code == 0);

    const auto full = scratch("full.fam");
    {
        std::ofstream f(full);
        f << "kld 3 4 3\n";
        for (int a = 3; a >= 0; --a)
            for (int b = 3 - a; b >= 0; --b) f << a << ' ' << b << ' ' << 3 - a - b << "\n";
    }
    auto bad = run({"verify", full});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("P2: fail") != std::string::npos);

    const auto broken = scratch("broken.fam");
    {
        std::ofstream f(broken);
        f << "kld 3 4 3\n2 1 0\n2 2 2\n";
    }
    auto malformed = run({"verify", broken});
    CHECK(malformed.code == 2);
    CHECK(malformed.err.find("line 3") != std::string::npos);
}

TEST_CASE("search") {
    auto brute = run({"search", "brute", "--k", "4", "--ell", "5", "--d", "3"});
    CHECK(brute.code == 0);
    CHECK(brute.out.find("count 15") != std::string::npos);

    auto none = run({"search", "exists", "--k", "20", "--ell", "24"});
    CHECK(none.code == 1);
    CHECK(none.out.rfind("none", 0) == 0);

    const auto report = scratch("count.json");
    auto count = run({"--report", report, "search", "count", "--k", "15", "--ell", "18"});
    CHECK(count.code == 0);
    CHECK(count.out.find("all-subsets") != std::string::npos);
    std::ifstream in(report);
    auto j = nlohmann::json::parse(in);
    CHECK(j["outcome"] == "found");
    CHECK(j["details"]["convention"] == "all-subsets");
    CHECK(j["details"]["count"].get<int>() > 0);

    CHECK(run({"search", "count", "--k", "15", "--ell", "18", "--max-nodes", "10"}).code == 3);
    CHECK(run({"search", "count", "--k", "4", "--ell", "8"}).code == 2);
    CHECK(run({"search", "sideways", "--k", "4", "--ell", "5"}).code == 2);
}

TEST_CASE("blowup, detect, certify, analyze") {
    const auto fam = scratch("b33d.fam");
    const auto graph = scratch("h933.hg");
    const auto cert = scratch("c6.walk");
    REQUIRE(run({"construct", "hls", "--k", "3", "--ell", "4", "--out", fam}).code == 0);
    REQUIRE(run({"blowup", "--family", fam, "--sizes", "3,3,3", "--out", graph}).code == 0);
    CHECK(load_hypergraph(graph).edge_count() == 27);

    auto label = run({"detect", "--family", fam, "--ell", "4", "--level", "label"});
    CHECK(label.code == 1);
    CHECK(label.out == "none\n");

    CHECK(run({"detect", "--graph", graph, "--ell", "6", "--cert", cert}).code == 0);
    CHECK(run({"certify", "--graph", graph, "--cert", cert}).code == 0);
    {
        std::ofstream f(cert);
        f << "walk cycle 4\n1 2 3 4\n";
    }
    CHECK(run({"certify", "--graph", graph, "--cert", cert}).code == 1);

    auto minus = run({"detect", "--family", fam, "--ell", "4", "--minus"});
    CHECK(minus.code == 0);
    CHECK(minus.out.find("missing=1") != std::string::npos);

    const auto h24fam = scratch("b24.fam");
    const auto h24 = scratch("h24.hg");
    REQUIRE(run({"construct", "hls", "--k", "4", "--ell", "6", "--out", h24fam}).code == 0);
    REQUIRE(run({"blowup", "--family", h24fam, "--n", "12", "--out", h24}).code == 0);
    auto analyze = run({"analyze", "--graph", h24});
    CHECK(analyze.code == 0);
    CHECK(analyze.out.find("|B| = 6") != std::string::npos);

    auto codeg = run({"codegree", "--graph", graph});
    CHECK(codeg.out.rfind("min codegree 2", 0) == 0);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"construct"}).code == 2);
    CHECK(run({"detect", "--ell", "5"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_SUITE_END();
