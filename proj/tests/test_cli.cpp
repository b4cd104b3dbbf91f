#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csolv/config.hpp"
#include "csolv/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace csolv;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, std::string& output) {
    std::string cmd = std::string(CSOLV_CLI_PATH) + " " + args + " > /tmp/csolv_cli_out.txt 2>&1";
    int rc = std::system(cmd.c_str());
    output = slurp("/tmp/csolv_cli_out.txt");
    return WEXITSTATUS(rc);
}

std::string machine_section(const std::string& text) {
    size_t pos = text.find("--- machine ---");
    return pos == std::string::npos ? "" : text.substr(pos);
}

} // namespace

TEST_CASE("minimal torus config parses") {
    RunConfig cfg = parse_config("[group]\nfamily = split-torus\np = 2\nk = 1\n");
    CHECK(cfg.group.family == Family::SplitTorus);
    CHECK(cfg.q() == 2);
    CHECK(cfg.pairs == std::vector<std::string>{"standard"});
}

TEST_CASE("unknown family rejected with suggestions") {
    try {
        parse_config("[group]\nfamily = borel-sl4\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("borel-sl3") != std::string::npos); // suggestion list
    }
}

TEST_CASE("unknown keys and sections rejected with line numbers") {
    CHECK_THROWS_AS(parse_config("[group]\nfamily = split-torus\ncolor = red\n"), config_error);
    CHECK_THROWS_AS(parse_config("[groupies]\n"), config_error);
    CHECK_THROWS_AS(parse_config("family = split-torus\n"), config_error); // entry before section
    CHECK_THROWS_AS(parse_config("[group]\np = 4\n"), config_error);       // p not prime
    CHECK_THROWS_AS(parse_config(""), config_error);                       // family required
}

TEST_CASE("golden borel q=4 config is valid and verify-all exits 0") {
    RunConfig cfg = load_config_file(std::string(CSOLV_CONFIG_DIR) + "/borel_q4.cfg");
    CHECK(cfg.q() == 4);
    std::string out;
    int rc = run_cli("--config " + std::string(CSOLV_CONFIG_DIR) + "/borel_q4.cfg --command verify-all", out);
    CHECK(rc == 0);
    CHECK(out.find("CHECK blocks.partition_complete PASS") != std::string::npos);
}

TEST_CASE("machine sections are byte-identical across runs") {
    std::string out1, out2;
    std::string base = "--config " + std::string(CSOLV_CONFIG_DIR) + "/torus_z2_q3.cfg --command verify-all";
    int rc1 = run_cli(base, out1);
    int rc2 = run_cli(base, out2);
    CHECK(rc1 == 0);
    CHECK(rc2 == 0);
    CHECK(machine_section(out1) == machine_section(out2));
    CHECK(!machine_section(out1).empty());
}

TEST_CASE("incomplete pair list fails with exit code 1") {
    std::ofstream f("/tmp/csolv_partial.cfg");
    f << "[group]\nfamily = borel-sl3\np = 2\nk = 1\n[pairs]\npair = case1\n";
    f.close();
    std::string out;
    int rc = run_cli("--config /tmp/csolv_partial.cfg --command blocks", out);
    CHECK(rc == 1);
    CHECK(out.find("CHECK blocks.partition_complete FAIL") != std::string::npos);
}

TEST_CASE("configuration and limit errors exit 2") {
    std::string out;
    CHECK(run_cli("--config /nonexistent.cfg --command blocks", out) == 2);
    std::ofstream f("/tmp/csolv_cap.cfg");
    f << "[group]\nfamily = borel-sl3\np = 2\nk = 3\n[run]\ncap = 100\n";
    f.close();
    CHECK(run_cli("--config /tmp/csolv_cap.cfg --command blocks", out) == 2);
    CHECK(out.find("cap") != std::string::npos);
    std::ofstream g("/tmp/csolv_ok.cfg");
    g << "[group]\nfamily = split-torus\np = 2\nk = 1\n";
    g.close();
    CHECK(run_cli("--config /tmp/csolv_ok.cfg --command notacommand", out) == 2);
}

TEST_CASE("in-process determinism of the machine section") {
    RunConfig cfg = load_config_file(std::string(CSOLV_CONFIG_DIR) + "/heis_q3.cfg");
    std::ostringstream a, b;
    int rc1 = run_command(cfg, "verify-all", a);
    int rc2 = run_command(cfg, "verify-all", b);
    CHECK(rc1 == 0);
    CHECK(rc2 == 0);
    CHECK(a.str() == b.str());
}
