// SPDX-License-Identifier: Apache-2.0

// End-to-end checks of the CLI binary. Skipped unless M3DNOC_CLI points at
// the built executable (ctest sets it).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char *env = std::getenv("M3DNOC_CLI");
    return env ? env : "";
}

int run(const std::string &args, const fs::path &log) {
    std::string cmd = cli_path() + " " + args + " > " + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string &name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path &p, const std::string &content) {
    std::ofstream out(p);
    out << content;
}

} // namespace

TEST_CASE("cli: generate, evaluate, brute, exit codes" * doctest::skip(cli_path().empty())) {
    fs::path work = fresh_dir("m3dnoc_cli_test");
    fs::path log = work / "log.txt";

    write_file(work / "config.json", R"({
        "grid": {"x": 2, "y": 2, "z": 1},
        "topology": {"kind": "mesh"},
        "traffic": {"kind": "uniform"},
        "process": {"alpha": 0.1, "beta": 0.2, "gamma": 0.1},
        "search": {"iter_max": 3, "patience": 100, "optimize_layout": false},
        "seed": 4
    })");
    std::string cfg = " --config " + (work / "config.json").string();

    SUBCASE("generate is deterministic and prints a summary") {
        REQUIRE(run("generate" + cfg + " --out " + (work / "g1").string(), log) == 0);
        std::string out = slurp(log);
        CHECK(out.find("routers: 4") != std::string::npos);
        CHECK(out.find("links: 4") != std::string::npos);
        CHECK(out.find("clustering_coefficient") != std::string::npos);

        REQUIRE(run("generate" + cfg + " --out " + (work / "g2").string(), log) == 0);
        for (const char *name : {"routers.csv", "links.csv", "placement.csv", "traffic.csv"})
            CHECK(slurp(work / "g1" / name) == slurp(work / "g2" / name));
    }

    SUBCASE("optimize then evaluate round-trips the design") {
        REQUIRE(run("optimize" + cfg + " --out " + (work / "opt").string(), log) == 0);
        CHECK(fs::exists(work / "opt" / "design_pa" / "stage_tiers.csv"));
        CHECK(fs::exists(work / "opt" / "history.csv"));
        REQUIRE(run("evaluate" + cfg + " --out " + (work / "opt").string() + " --design " +
                        (work / "opt" / "design_pa").string(),
                    log) == 0);
        CHECK(slurp(log).find("edp:") != std::string::npos);
    }

    SUBCASE("invalid design exits with the validation code") {
        REQUIRE(run("optimize" + cfg + " --out " + (work / "bad").string(), log) == 0);
        // corrupt the tier file: a top link on BT allocators
        write_file(work / "bad" / "design_pa" / "stage_tiers.csv",
                   "router_id,vca,swa,xbar\n0,BT,BT,BT\n1,BT,BT,BT\n2,BT,BT,BT\n3,BT,BT,BT\n");
        write_file(work / "bad" / "design_pa" / "link_tiers.csv",
                   "link_id,tier\n0,top\n1,top\n2,top\n3,top\n");
        CHECK(run("evaluate" + cfg + " --design " + (work / "bad" / "design_pa").string(), log) ==
              2);
        CHECK(slurp(log).find("tier-compatibility") != std::string::npos);
    }

    SUBCASE("oversized brute instance exits with the infeasible code") {
        write_file(work / "big.json", R"({
            "grid": {"x": 4, "y": 4, "z": 1},
            "topology": {"kind": "mesh"},
            "traffic": {"kind": "uniform"},
            "seed": 4
        })");
        CHECK(run("brute --config " + (work / "big.json").string() + " --out " +
                      (work / "brute").string(),
                  log) == 3);
    }

    SUBCASE("malformed config exits with the validation code") {
        write_file(work / "broken.json", "{ not json");
        CHECK(run("generate --config " + (work / "broken.json").string(), log) == 2);
    }

    SUBCASE("unwritable output directory fails cleanly") {
        int rc = run("generate" + cfg + " --out /proc/m3dnoc_forbidden", log);
        CHECK(rc != 0);
        CHECK(!slurp(log).empty());
    }
}
