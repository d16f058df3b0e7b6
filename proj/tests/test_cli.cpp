#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "efgame/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = efg::run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "efgame-cli-tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"selfplay", "--length", "w^"}).code == 2);
    CHECK(run({"selfplay", "--game", "chess"}).code == 2);
    CHECK(run({"selfplay", "--bounds", "set=0"}).code == 2);
    CHECK(run({"selfplay", "--resume-stage", "w^4", "--length", "w^3"}).code == 2);
    CHECK(run({"verify", "--bounds", "nope=1"}).code == 2);
    CHECK(run({"replay", scratch("missing.txt").string()}).code == 2);
    CHECK(run({"replay"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("selfplay and replay") {
    const fs::path t = scratch("n-pair.txt");
    const Run r = run({"selfplay", "--game", "n-pair", "--length", "w^3", "--moves", "64", "--seed", "7",
                       "--transcript", t.string(), "--strict"});
    CHECK(r.code == 0);
    CHECK(r.out.find("64 moves") != std::string::npos);
    CHECK(run({"replay", "--transcript", t.string()}).code == 0);
    CHECK(run({"replay", t.string()}).out == "replay: OK\n");

    std::string text = slurp(t);
    const std::size_t iso = text.find("ISO: ", text.find("\n0 | "));
    text[iso + 8] = text[iso + 8] == '1' ? '2' : '1';
    std::ofstream(t, std::ios::binary) << text;
    const Run bad = run({"replay", t.string()});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("line 12") != std::string::npos);

    const Run resumed = run({"selfplay", "--game", "m-pair", "--resume-stage", "w", "--moves", "16"});
    CHECK(resumed.code == 0);
    CHECK(resumed.out.find("# start: w^1*1") != std::string::npos);

    const Run empty = run({"selfplay", "--moves", "0"});
    CHECK(empty.code == 0);
    CHECK(empty.out.find(" | AIS: ") == std::string::npos);
    CHECK(empty.out.rfind("# engine: efgame/1.0", 0) == 0);

    const Run sets = run({"selfplay", "--bounds", "set=8,sequenced=1", "--moves", "10", "--seed", "2"});
    CHECK(sets.code == 0);
    CHECK(sets.out.find("# iso: sequenced") != std::string::npos);
}

TEST_CASE("selfplay is deterministic") {
    CHECK(run({"selfplay", "--seed", "5", "--moves", "20"}).out == run({"selfplay", "--seed", "5", "--moves", "20"}).out);
    CHECK(run({"selfplay", "--seed", "5", "--moves", "20"}).out != run({"selfplay", "--seed", "6", "--moves", "20"}).out);
}

TEST_CASE("verify") {
    const fs::path report = scratch("report.txt");
    const Run ok = run({"verify", "--transcript", report.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("VERDICT: PASS 0-violations") != std::string::npos);
    CHECK(slurp(report).find("VERDICT: PASS") != std::string::npos);
    const Run fault = run({"verify", "--bounds", "fault=1"});
    CHECK(fault.code == 1);
    CHECK(fault.out.find("VERDICT: FAIL 1-violations") != std::string::npos);
}

TEST_CASE("interactive play") {
    const Run quit = run({"play"}, "quit\n");
    CHECK(quit.code == 0);
    CHECK(quit.out.find("audit: OK") != std::string::npos);
    CHECK(run({"play"}, "").code == 0);

    const Run one = run({"play"}, "A(0; x5)\nquit\n");
    CHECK(one.code == 0);
    CHECK(one.out.find("A(0; x5) => A(0; x0+x1+x5)") != std::string::npos);

    const Run typo = run({"play"}, "L: A(0; x5), A(0; q)\nR: A(w; x2)\nmap\nquit\n");
    CHECK(typo.code == 0);
    CHECK(typo.out.find("parse error") != std::string::npos);
    CHECK(typo.out.find("^") != std::string::npos);
    CHECK(typo.out.find("=> A(w^1*1; x2)") != std::string::npos);

    const fs::path t = scratch("played.txt");
    CHECK(run({"play", "--game", "n-pair", "--transcript", t.string()}, "A(0; x5)\nR: A(w^2; x1), B(w; 3)\nquit\n").code == 0);
    CHECK(run({"replay", t.string()}).code == 0);
}

TEST_CASE("partition and demo") {
    const Run p = run({"partition", "--length", "w*2", "--color", "0", "--count", "4"});
    CHECK(p.code == 0);
    CHECK(p.out.rfind("U_0: 0 ", 0) == 0);
    CHECK(run({"partition", "--locate", "0"}).out == "0 is element 0 of U_0\n");
    CHECK(run({"partition", "--length", "w", "--color", "w"}).code == 2);
    const Run d = run({"demo"});
    CHECK(d.code == 0);
    CHECK(d.out.find("audit: OK") != std::string::npos);
}
