#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "commands.hpp"
#include "config.hpp"

using namespace cellflow_cli;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per call, removed by the destructor.
struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("cellflow_test_cli_" + std::to_string(::getpid()) + "_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const std::string& sub = "") const { return (sub.empty() ? path : path / sub).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

int run(const std::vector<std::string>& args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (err_text) *err_text = err.str();
    return code;
}

int parse_code(const std::vector<std::string>& args) {
    RunConfig c;
    std::string help;
    try {
        parse_and_validate(args, c, help);
    } catch (const CliError& e) {
        return e.exit_code();
    }
    return kExitOk;
}

}  // namespace

TEST_CASE("staircase arguments parse into a 400-row range") {
    ScratchDir dir("parse");
    RunConfig c;
    std::string help;
    REQUIRE(parse_and_validate({"staircase", "--b", "0.05", "--eps", "0.04", "--alpha", "0.5:1.5:400", "--out",
                                dir.str()},
                               c, help));
    CHECK(c.command == "staircase");
    CHECK(c.number("b") == 0.05);
    CHECK(c.number("eps") == 0.04);
    const Range r = c.range("alpha");
    CHECK(r.count == 400);
    CHECK(r.lo == 0.5);
    CHECK(r.hi == 1.5);
    CHECK(c.integer("q_cap") == 12);
}

TEST_CASE("range syntax is lo:hi:count") {
    const Range r = parse_range("0.1:0.2:11");
    CHECK(r.lo == 0.1);
    CHECK(r.hi == 0.2);
    CHECK(r.count == 11);
    for (const char* bad : {"0.1:0.2", "a:b:3", "0.1:0.2:x", "0.1:0.2:3:4"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_range(bad), CliError);
    }
}

TEST_CASE("usage errors exit with 2") {
    ScratchDir dir("usage");
    CHECK(parse_code({"staircase", "--eps", "0.04", "--alpha", "0.5:1.5:400", "--out", dir.str()}) == kExitUsage);
    CHECK(parse_code({"staircase", "--b", "0.05", "--eps", "0.04", "--alpha", "0.5:1.5:400", "--bogus", "1"}) ==
          kExitUsage);
    CHECK(parse_code({"nonsense"}) == kExitUsage);
    CHECK(parse_code({}) == kExitUsage);
    std::string err;
    CHECK(run({"staircase", "--eps", "0.04", "--alpha", "0.5:1.5:400", "--out", dir.str()}, &err) == kExitUsage);
    CHECK(err.find("--b") != std::string::npos);
}

TEST_CASE("a flag overrides the config file") {
    ScratchDir dir("override");
    const fs::path cfg = dir.path / "run.json";
    {
        std::ofstream f(cfg);
        f << R"({"command": "staircase", "b": 0.07, "eps": 0.04, "alpha": "0.5:1.5:400", "q_cap": 8})";
    }
    RunConfig c;
    std::string help;
    REQUIRE(parse_and_validate({"staircase", "--config", cfg.string(), "--b", "0.05", "--out", dir.str("o")}, c,
                               help));
    CHECK(c.number("b") == 0.05);
    CHECK(c.integer("q_cap") == 8);
    CHECK(c.range("alpha").count == 400);
    const std::string echo = c.canonical_json();
    CHECK(echo.find("\"b\": 0.05") != std::string::npos);
    CHECK(echo.find("0.07") == std::string::npos);
    // Rendering twice gives the same text.
    CHECK(echo == c.canonical_json());
}

TEST_CASE("bad config files are usage errors") {
    ScratchDir dir("badcfg");
    const fs::path unknown = dir.path / "unknown.json";
    const fs::path broken = dir.path / "broken.json";
    const fs::path other = dir.path / "other.json";
    std::ofstream(unknown) << R"({"b": 0.05, "eps": 0.04, "alpha": "0.5:1.5:400", "colour": "red"})";
    std::ofstream(broken) << "{not json";
    std::ofstream(other) << R"({"command": "chess"})";
    const std::string out = dir.str("o");
    CHECK(parse_code({"staircase", "--config", unknown.string(), "--out", out}) == kExitUsage);
    CHECK(parse_code({"staircase", "--config", broken.string(), "--out", out}) == kExitUsage);
    CHECK(parse_code({"staircase", "--config", other.string(), "--b", "0.05", "--eps", "0.04", "--alpha",
                      "0.5:1.5:400", "--out", out}) == kExitUsage);
    CHECK(parse_code({"staircase", "--config", (dir.path / "missing.json").string(), "--out", out}) == kExitUsage);
}

TEST_CASE("validation errors exit with 3") {
    ScratchDir dir("validation");
    const std::string out = dir.str();
    CHECK(parse_code({"staircase", "--b", "-1", "--eps", "0.04", "--alpha", "0.5:1.5:400", "--out", out}) ==
          kExitValidation);
    CHECK(parse_code({"staircase", "--b", "0.05", "--eps", "0.04", "--alpha", "0.5:1.5:50", "--out", out}) ==
          kExitValidation);
    CHECK(parse_code({"tongues", "--b", "0.05", "--alpha", "0.8:1.2:16", "--eps", "0.01:0.04:16", "--out", out}) ==
          kExitValidation);
    CHECK(parse_code({"chess", "--a", "0.05", "--b", "0.05", "--h0", "0", "--start", "0,0,1,1", "--out", out}) ==
          kExitValidation);
    // Strong forcing passes parsing but the library rejects it.
    CHECK(run({"chess", "--a", "0.6", "--b", "0.6", "--h0", "0", "--out", out}) == kExitValidation);
}

TEST_CASE("unwritable output exits with 4") {
    ScratchDir dir("io");
    // A file where the output directory should be.
    const fs::path blocker = dir.path / "blocked";
    std::ofstream(blocker) << "x";
    CHECK(run({"chess", "--a", "0.05", "--b", "0.05", "--h0", "-0.04704", "--out", blocker.string()}) != kExitOk);
    // A directory where an output file should be.
    fs::create_directories(dir.path / "o" / "chess.csv");
    std::string err;
    CHECK(run({"chess", "--a", "0.05", "--b", "0.05", "--h0", "-0.04704", "--out", dir.str("o")}, &err) == kExitIo);
    CHECK(err.find("chess.csv") != std::string::npos);
}

TEST_CASE("numerical failures exit with 5") {
    ScratchDir dir("numerical");
    CHECK(run({"simulate", "--a", "0.001", "--b", "0.001", "--eps", "0.04", "--t-end", "200", "--out", dir.str()}) ==
          kExitNumerical);
}

TEST_CASE("staircase CSV has the fixed columns and is reproducible") {
    ScratchDir dir("staircase");
    const std::vector<std::string> args{"staircase", "--b", "0.05", "--eps", "0.04", "--alpha", "0.95:1.05:100",
                                        "--out", dir.str("one")};
    REQUIRE(run(args) == kExitOk);
    std::vector<std::string> again = args;
    again.back() = dir.str("two");
    REQUIRE(run(again) == kExitOk);

    const std::string csv = slurp(dir.path / "one" / "staircase.csv");
    CHECK(first_line(csv) == "alpha,s,rho_kind,p,q,rho_lo,rho_hi,m,status");
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 101);
    CHECK(csv == slurp(dir.path / "two" / "staircase.csv"));
    CHECK(slurp(dir.path / "one" / "staircase_plateaus.csv") == slurp(dir.path / "two" / "staircase_plateaus.csv"));
    CHECK(fs::exists(dir.path / "one" / "staircase.json"));
    const std::string svg = slurp(dir.path / "one" / "staircase.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path / "one" / ".cellflow_write_probe"));
}

TEST_CASE("chess CSV is reproducible and svg can be switched off") {
    ScratchDir dir("chess");
    const std::vector<std::string> base{"chess", "--a", "0.05", "--b", "0.05", "--h0", "-0.04704", "--turns", "12"};
    std::vector<std::string> one = base, two = base;
    for (const char* s : {"--out", ""}) one.push_back(s), two.push_back(s);
    one.back() = dir.str("one");
    two.back() = dir.str("two");
    two.push_back("--svg");
    two.push_back("false");
    REQUIRE(run(one) == kExitOk);
    REQUIRE(run(two) == kExitOk);
    const std::string csv = slurp(dir.path / "one" / "chess.csv");
    CHECK(first_line(csv) == "index,k1,k2,x,y,turn");
    CHECK(csv == slurp(dir.path / "two" / "chess.csv"));
    CHECK(fs::exists(dir.path / "one" / "chess.svg"));
    CHECK_FALSE(fs::exists(dir.path / "two" / "chess.svg"));
}

TEST_CASE("help exits cleanly") {
    std::ostringstream out, err;
    CHECK(run_cli({"--help"}, out, err) == kExitOk);
    CHECK(out.str().find("staircase") != std::string::npos);
    std::ostringstream out2;
    CHECK(run_cli({"staircase", "--help"}, out2, err) == kExitOk);
    CHECK(out2.str().find("--alpha") != std::string::npos);
}
