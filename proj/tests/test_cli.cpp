#include <doctest.h>

#include "fdrlab/cli.hpp"
#include "fdrlab/tracefile.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = fdrlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    return kv;
}

std::vector<std::string> csv_row(const std::string& report) {
    std::istringstream in(report);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    std::vector<std::string> f;
    std::stringstream rs(row);
    for (std::string x; std::getline(rs, x, ',');) {
        f.push_back(x);
    }
    return f;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("fdrlab_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

} // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({"generate", "--eps", "0.1", "--n", "100"}).code == 1);
    CHECK(run({"theory", "--eps", "0.1"}).code == 1);
    CHECK(run({"theory", "--eps", "0.1", "--m", "10", "--alpha", "fast"}).code == 1);
    CHECK(run({"table", "--preset", "table1", "--spec", "x.json"}).code == 1);
    CHECK(run({"table"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("theory subcommand") {
    auto r = run({"theory", "--eps", "0.1", "--m", "100", "--alpha", "0.02"});
    REQUIRE(r.code == 0);
    auto kv = key_values(r.out);
    CHECK(std::fabs(std::stod(kv.at("var_e")) - 0.000578) < 0.5e-6);
    CHECK(std::stod(kv.at("var_d")) == doctest::Approx(0.00045));
    CHECK(kv.at("m") == "100");

    r = run({"theory", "--eps", "0.1", "--m", "100"});
    REQUIRE(r.code == 0);
    CHECK(std::stod(key_values(r.out).at("alpha")) == doctest::Approx(0.02));

    r = run({"theory", "--eps", "0", "--m", "10"});
    REQUIRE(r.code == 0);
    kv = key_values(r.out);
    CHECK(kv.at("var_d") == "0");
    CHECK(kv.at("var_e") == "0");

    r = run({"theory", "--eps", "0.2", "--m", "10", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("var_d").get<double>() == doctest::Approx(0.008));

    CHECK(run({"theory", "--eps", "1.5", "--m", "10"}).code == 2);
    CHECK(run({"theory", "--eps", "0.1", "--m", "1"}).code == 2);
}

TEST_CASE("generate and estimate") {
    TempDir dir;
    const auto trace = dir.file("g.trace");
    auto r = run({"generate", "--eps", "0.2", "--n", "50000", "--seed", "5", "--out", trace});
    REQUIRE(r.code == 0);
    auto kv = key_values(r.out);
    CHECK(kv.at("n") == "50000");
    const auto series = fdrlab::read_trace_file(trace);
    CHECK(series.size() == 50000);
    CHECK(series.outcomes == fdrlab::generate(fdrlab::profile_stationary(0.2), 50000, 5).outcomes);

    r = run({"estimate", "--trace", trace, "--m", "10", "--skip", "1000"});
    REQUIRE(r.code == 0);
    const auto f = csv_row(r.out);
    REQUIRE(f.size() == 20);
    CHECK(f[0] == "stationary");
    CHECK(f[1] == "0.2");
    CHECK(f[7] == "48000");
    CHECK(r.err.find("mse_d=") != std::string::npos);

    const auto report = dir.file("r.jsonl");
    r = run({"estimate", "--trace", trace, "--m", "10", "--skip", "1000", "--format", "jsonl", "--out", report});
    REQUIRE(r.code == 0);
    std::ifstream in(report);
    const auto rows = fdrlab::read_report_jsonl(in);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].m == 10);
    CHECK(rows[0].alpha == doctest::Approx(0.2));

    r = run({"generate", "--eps0", "0.1", "--delta", "0.05", "--freq", "0.001", "--n", "3000", "--out",
             dir.file("s.trace")});
    REQUIRE(r.code == 0);
    CHECK(key_values(r.out).at("source").find("profile=sinusoidal") != std::string::npos);
    CHECK(run({"generate", "--eps0", "0.1", "--delta", "0.05", "--n", "10", "--out", dir.file("x")}).code == 1);
    CHECK(run({"generate", "--eps", "0.1", "--eps0", "0.1", "--n", "10", "--out", dir.file("x")}).code == 1);
}

TEST_CASE("estimate on a hand-written trace") {
    TempDir dir;
    const auto trace = dir.file("h.trace");
    write_text(trace, "#fdrtrace v1\n#ts=0.5\n#count=4\n1\n0\n1\n1\n");
    const auto r = run({"estimate", "--trace", trace, "--m", "1", "--alpha", "0.5", "--skip", "0"});
    REQUIRE(r.code == 0);
    const auto f = csv_row(r.out);
    REQUIRE(f.size() == 20);
    CHECK(f[0] == "external");
    CHECK(f[7] == "3");
    CHECK(std::stod(f[16]) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(std::stod(f[14]) == doctest::Approx(0.0));

    const auto ones = dir.file("ones.trace");
    write_text(ones, "#fdrtrace v1\n#ts=0.5\n#count=40\n" + [] {
        std::string s;
        for (int i = 0; i < 40; ++i) {
            s += "1\n";
        }
        return s;
    }());
    const auto o = run({"estimate", "--trace", ones, "--m", "5", "--skip", "0"});
    REQUIRE(o.code == 0);
    const auto g = csv_row(o.out);
    for (int k : {8, 9, 10, 11, 12, 14, 15, 16, 17, 18}) {
        CHECK(g[static_cast<std::size_t>(k)] == "0");
    }
    CHECK(g[13] == "green");
    CHECK(g[19] == "green");
}

TEST_CASE("data and io errors map to exit codes") {
    TempDir dir;
    CHECK(run({"estimate", "--trace", dir.file("missing"), "--m", "10"}).code == 3);
    const auto bad = dir.file("bad.trace");
    write_text(bad, "#fdrtrace v1\n#ts=0.5\n#count=2\n1\n");
    CHECK(run({"estimate", "--trace", bad, "--m", "1", "--skip", "0"}).code == 2);
    const auto short_trace = dir.file("short.trace");
    write_text(short_trace, "#fdrtrace v1\n#ts=0.5\n#count=2\n1\n0\n");
    const auto r = run({"estimate", "--trace", short_trace, "--m", "10", "--skip", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("need at least") != std::string::npos);
    CHECK(run({"table", "--spec", dir.file("nope.json")}).code == 3);
    CHECK(run({"table", "--preset", "table1", "--n-stats", "0"}).code == 2);
}

TEST_CASE("table subcommand") {
    TempDir dir;
    const auto spec = dir.file("spec.json");
    write_text(spec, R"({"profiles":[{"eps":0.1},{"kind":"sinusoidal","eps0":0.2,"delta_eps":0.1,"freq_hz":0.01}],
                         "windows":[10,20],"n_stats":5000,"skip":100})");
    auto r = run({"table", "--spec", spec, "--threads", "2"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
    }
    CHECK(lines == 5);

    const auto again = run({"table", "--spec", spec, "--threads", "1"});
    CHECK(again.out == r.out);

    r = run({"table", "--preset", "table2", "--dump-spec"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("profiles").size() == 4);
    CHECK(j.at("base_seed").get<int>() == 42);
}
