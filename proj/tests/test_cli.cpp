#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

static std::string g_cli;

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char ch : s) {
        if (ch == '\'')
            out += "'\\''";
        else
            out += ch;
    }
    return out + "'";
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::string cmd = shell_quote(g_cli);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json parse_out(const RunResult& r) { return json::parse(r.out); }

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("bnhcli-" + tag + "-" + std::to_string(getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::string out((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return out;
}

} // namespace

TEST_CASE("homology report of the worked example") {
    RunResult r = run_cli({"bn", "--field", "q", "--support", "-1,2,3", "--n", "3", "--json"});
    CHECK(r.code == 0);
    json j = parse_out(r);
    CHECK(j["schema"] == "bn-report");
    CHECK(j["refused"] == false);
    CHECK(j["generators_per_position"] == 27);
    CHECK(j["group"]["free_rank"] == 2);
    CHECK(j["group"]["invariant_factors"] == json::array({"3", "6"}));
}

TEST_CASE("weight two is refused with the reason") {
    RunResult r = run_cli({"bn", "--field", "q", "--support", "-1,2", "--n", "2"});
    CHECK(r.code == 2);
    CHECK(r.out.find("K_3^ind") != std::string::npos);
}

TEST_CASE("identical configurations produce identical bytes") {
    std::vector<std::string> args = {"bn",  "--field", "q", "--support", "-1,2,3",
                                    "--n", "3",       "--seed", "11"};
    RunResult a = run_cli(args), b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    std::vector<std::string> v = {"verify", "--suite", "exterior", "--count", "25", "--seed", "3"};
    RunResult c = run_cli(v), d = run_cli(v);
    CHECK(c.code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("cache cold and hot runs agree") {
    TempDir dir("cache");
    std::vector<std::string> args = {"bn",  "--field",      "q", "--support", "-1,2,3",
                                    "--n", "3",            "--cache-dir", dir.path.string()};
    RunResult cold = run_cli(args);
    CHECK(cold.code == 0);
    size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir.path)) {
        ++files;
        CHECK(e.path().extension() == ".json");
    }
    CHECK(files == 4); // one presentation per weight 0..3
    RunResult hot = run_cli(args);
    CHECK(hot.code == 0);
    CHECK(cold.out == hot.out);
}

TEST_CASE("invalid inputs exit with code two") {
    CHECK(run_cli({"bn", "--field", "q", "--support", "-1,2", "--n", "3", "--bogus"}).code == 2);
    CHECK(run_cli({"bn", "--field", "z", "--support", "-1,2", "--n", "3"}).code == 2);
    CHECK(run_cli({"bn", "--field", "q", "--support", "-1,4", "--n", "3"}).code == 2);
    CHECK(run_cli({"factor", "--elem", "12/"}).code == 2);
    CHECK(run_cli({"verify", "--suite", "no-such-suite"}).code == 2);
    CHECK(run_cli({"chiprime", "--field", "q", "--support", "-1,2", "--n", "3",
                   "--kernel-index", "100000"}).code == 2);
}

TEST_CASE("factor and normal form commands") {
    RunResult f = run_cli({"factor", "--elem", "-12/35", "--text"});
    CHECK(f.code == 0);
    CHECK(f.out == "-1 * 2^2 * 3^1 * 5^-1 * 7^-1\n");

    RunResult z = run_cli({"nf", "--field", "q", "--entries", "3,-2"});
    CHECK(z.code == 0);
    CHECK(parse_out(z)["zero"] == true);

    RunResult nz = run_cli({"nf", "--field", "q", "--entries", "-1,-1"});
    CHECK(nz.code == 0);
    CHECK(parse_out(nz)["zero"] == false);

    RunResult ft = run_cli({"nf", "--field", "f3t", "--entries", "t,t+1"});
    CHECK(ft.code == 0);
    json j = parse_out(ft);
    CHECK(j["weight"] == 2);
}

TEST_CASE("verify suites pass at smoke scale") {
    for (const std::string suite :
         {"steinberg", "product-formula", "dd-zero", "bar-cycles", "exterior"}) {
        long count = (suite == "dd-zero") ? 3 : 40;
        RunResult r = run_cli(
            {"verify", "--suite", suite, "--count", std::to_string(count), "--seed", "17"});
        CHECK(r.code == 0);
        json j = parse_out(r);
        CHECK(j["pass"] == true);
        CHECK(j["checked"].get<long>() > 0);
    }
}

TEST_CASE("scan reports stabilization ranks") {
    RunResult r = run_cli({"scan", "--field", "q", "--n", "3", "--support", "-1,2", "--support",
                           "-1,2,3", "--support", "-1,2,3,5"});
    CHECK(r.code == 0);
    json j = parse_out(r);
    CHECK(j["schema"] == "stabilization-scan");
    CHECK(j["groups"][0]["free_rank"] == 0);
    CHECK(j["groups"][1]["free_rank"] == 2);
    CHECK(j["groups"][2]["free_rank"] == 8);
    CHECK(j["steps"][0]["induced_rank"] == 0);
    CHECK(j["steps"][1]["induced_rank"] == 2);

    CHECK(run_cli({"scan", "--field", "q", "--n", "3", "--support", "-1,2,7", "--support",
                   "-1,2,3"}).code == 2);
}

TEST_CASE("kappa command emits a certified cycle") {
    TempDir dir("kappa");
    fs::path in = dir.path / "triples.json";
    write_file(in, "[{\"coeff\":\"1\",\"a\":\"2\",\"b\":\"3\",\"c\":[\"5\"]},"
                   "{\"coeff\":\"-2\",\"a\":\"1/2\",\"b\":\"-3\",\"c\":[\"7\"]}]");
    RunResult r = run_cli({"kappa", "--n", "3", "--input", in.string()});
    CHECK(r.code == 0);
    json j = parse_out(r);
    CHECK(j["boundary_is_zero"] == true);
    CHECK(j["chain"]["degree"] == 3);
    CHECK(!j["chain"]["terms"].empty());

    CHECK(run_cli({"kappa", "--n", "2", "--input", in.string()}).code == 2);
    CHECK(run_cli({"kappa", "--n", "3", "--field", "f3t", "--input", in.string()}).code == 2);
    write_file(in, "[{\"coeff\":\"1\",\"a\":\"0\",\"b\":\"3\",\"c\":[\"5\"]}]");
    CHECK(run_cli({"kappa", "--n", "3", "--input", in.string()}).code == 2);
}

TEST_CASE("chiprime certifies kernel elements and rejects the rest") {
    RunResult r = run_cli(
        {"chiprime", "--field", "q", "--support", "-1,2,3", "--n", "3", "--kernel-index", "0"});
    CHECK(r.code == 0);
    json j = parse_out(r);
    CHECK(j["certified"] == true);
    CHECK(j["kernel_rank"].get<int>() > 0);

    // tau (1,2) with kappa 1 has a surviving second differential
    TempDir dir("chi");
    fs::path in = dir.path / "x.json";
    write_file(in, "{\"entries\": [[16, \"1\"]]}");
    CHECK(run_cli({"chiprime", "--field", "q", "--support", "-1,2,3", "--n", "3", "--input",
                   in.string()}).code == 2);
}

TEST_CASE("golden record and check round-trip") {
    TempDir dir("golden");
    fs::path file = dir.path / "golden.json";
    CHECK(run_cli({"golden", "check", "--file", file.string()}).code == 2); // nothing recorded yet

    RunResult rec = run_cli({"golden", "record", "--file", file.string()});
    CHECK(rec.code == 0);
    CHECK(parse_out(rec)["keys"].size() == 5);

    RunResult chk = run_cli({"golden", "check", "--file", file.string()});
    CHECK(chk.code == 0);
    CHECK(parse_out(chk)["ok"] == true);

    // a stale convention version invalidates rather than comparing
    std::string text = read_file(file);
    size_t pos = text.find("\"version\": 1");
    REQUIRE(pos != std::string::npos);
    write_file(file, text.replace(pos, 12, "\"version\": 0"));
    RunResult stale = run_cli({"golden", "check", "--file", file.string()});
    CHECK(stale.code == 1);
    CHECK(parse_out(stale)["results"][0]["status"] == "stale-convention");

    // a tampered value is a mismatch
    CHECK(run_cli({"golden", "record", "--file", file.string()}).code == 0);
    text = read_file(file);
    pos = text.find("\"free_rank\": 2");
    REQUIRE(pos != std::string::npos);
    write_file(file, text.replace(pos, 14, "\"free_rank\": 3"));
    RunResult bad = run_cli({"golden", "check", "--file", file.string()});
    CHECK(bad.code == 1);
    json jb = parse_out(bad);
    CHECK(jb["ok"] == false);
    bool saw_mismatch = false;
    for (const auto& res : jb["results"]) saw_mismatch |= res["status"] == "mismatch";
    CHECK(saw_mismatch);
}

int main(int argc, char** argv) {
    std::vector<char*> pass;
    pass.push_back(argv[0]);
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (g_cli.empty() && !a.empty() && a[0] != '-') {
            g_cli = a;
        } else {
            pass.push_back(argv[i]);
        }
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-bnhcli> [doctest options]\n");
        return 1;
    }
    doctest::Context ctx;
    ctx.applyCommandLine((int)pass.size(), pass.data());
    return ctx.run();
}
