#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "spinent");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = spinent::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "spinent_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, SpectrumN4) {
    const Result r = run({"spectrum", "--n", "4", "--delta", "1"});
    ASSERT_EQ(r.code, spinent::cli::kExitOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 17U);
    EXPECT_EQ(rows[0], "energy,s,k");
    EXPECT_EQ(rows[1], "-2,0,0");
}

TEST(Cli, SpectrumN1HasTwoRows) {
    const Result r = run({"spectrum", "--n", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).size(), 3U);
}

TEST(Cli, SpectrumJson) {
    const Result r = run({"spectrum", "--n", "3", "--sign", "-", "--delta", "-0.5", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("schema_version"), 1);
    EXPECT_EQ(j.at("rows").size(), 8U);
    EXPECT_EQ(j.at("model").at("couplings")[0], -1.0);
}

TEST(Cli, SpectrumFromConfig) {
    const Result r = run({"spectrum", "--config", SPINENT_CONFIG_DIR "/nmr_placeholder.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 33U);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(split(rows[i])[0], "0");
        EXPECT_EQ(split(rows[i]).size(), 3U);  // open chain: empty k column
        EXPECT_EQ(split(rows[i])[2], "");
    }
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"bogus"}).code, spinent::cli::kExitUsage);
    const Result bad_delta = run({"spectrum", "--delta", "abc"});
    EXPECT_EQ(bad_delta.code, spinent::cli::kExitUsage);
    EXPECT_FALSE(bad_delta.err.empty());
    EXPECT_EQ(run({"spectrum", "--n", "13"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"spectrum", "--j", "1", "--sign", "+"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"spectrum", "--config", "/nonexistent.json"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"spectrum", "--format", "xml"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"surface", "--n", "4", "--pair", "1,5"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"surface", "--n", "4", "--t", "0:1:0.1"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"tc", "--delta", "1:0:0.1"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"nmr", "--stage", "F"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"nmr", "--stage", "A", "--all"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"verify", "--only", "9"}).code, spinent::cli::kExitUsage);
    EXPECT_EQ(run({"--jobs", "0", "tc"}).code, spinent::cli::kExitUsage);
}

TEST(Cli, BadConfigIsUsageError) {
    const fs::path p = scratch("bad.json");
    std::ofstream(p) << R"({"n_qubits": 4, "couplings": [1, 1], "delta": 1})";
    const Result r = run({"spectrum", "--config", p.string()});
    EXPECT_EQ(r.code, spinent::cli::kExitUsage);
    EXPECT_NE(r.err.find("couplings"), std::string::npos);
}

TEST(Cli, UnwritableOutputIsComputationError) {
    const Result r = run({"spectrum", "--n", "2", "-o", "/nonexistent/dir/out.csv"});
    EXPECT_EQ(r.code, spinent::cli::kExitComputation);
}

TEST(Cli, SurfaceSinglePointAndGrid) {
    const Result one = run({"surface", "--n", "4", "--delta", "1", "--t", "0.5"});
    ASSERT_EQ(one.code, 0) << one.err;
    const auto rows = lines(one.out);
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_EQ(rows[0], "delta,temperature,concurrence");
    EXPECT_EQ(split(rows[1])[0], "1");
    EXPECT_EQ(split(rows[1])[1], "0.5");

    const Result grid = run({"surface", "--n", "4", "--pair", "1,2", "--delta", "-2:8:0.5", "--t", "0.05:3:0.05"});
    ASSERT_EQ(grid.code, 0) << grid.err;
    EXPECT_EQ(lines(grid.out).size(), 1U + 21U * 60U);
}

TEST(Cli, SurfaceSideOutputsAndJson) {
    const fs::path tc = scratch("tc.csv");
    const fs::path iso = scratch("iso.csv");
    const Result r = run({"surface", "--n", "4", "--delta", "0:2:1", "--t", "0.1:1:0.1", "--levels", "0.1,0.2",
                          "--tc-output", tc.string(), "--iso-output", iso.string(), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("rows").size(), 30U);
    EXPECT_EQ(j.at("tc").size(), 3U);
    EXPECT_FALSE(j.at("iso").empty());
    EXPECT_EQ(lines(slurp(tc))[0], "delta,tc,identically_zero");
    EXPECT_EQ(lines(slurp(tc)).size(), 4U);
    EXPECT_EQ(lines(slurp(iso))[0], "level,delta,temperature");
}

TEST(Cli, TcOddRingPositiveCouplingIsZero) {
    const Result r = run({"tc", "--n", "3", "--sign", "+", "--pair", "1,2", "--delta", "-3:8:1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows[0], "delta,tc,identically_zero");
    ASSERT_EQ(rows.size(), 13U);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(split(rows[i])[1], "0");
        EXPECT_EQ(split(rows[i])[2], "1");
    }
}

TEST(Cli, TcN4NonDecreasing) {
    const Result r = run({"tc", "--n", "4", "--pair", "1,2", "--delta", "-2:8:0.25", "--jobs", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    double previous = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double tc = std::stod(split(rows[i])[1]);
        EXPECT_GE(tc, previous - 1e-8);
        previous = tc;
    }
}

TEST(Cli, TcSixRingFarPair) {
    const Result r = run({"tc", "--n", "6", "--pair", "1,4", "--delta", "0:2:1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("pair"), json::array({1, 4}));
    EXPECT_EQ(j.at("rows").size(), 3U);
}

TEST(Cli, OutputIndependentOfJobs) {
    const std::vector<std::string> base{"surface", "--n", "5", "--delta", "-1:2:0.5", "--t", "0.1:2:0.1"};
    auto with_jobs = [&](const char* k) {
        auto args = base;
        args.insert(args.begin(), {"--jobs", k});
        return run(args);
    };
    const Result a = with_jobs("1");
    const Result b = with_jobs("4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    ::setenv("SPINENT_JOBS", "3", 1);
    EXPECT_EQ(run(base).out, a.out);
    ::unsetenv("SPINENT_JOBS");
}

TEST(Cli, FileOutputIsDeterministic) {
    const fs::path a = scratch("a.csv");
    const fs::path b = scratch("b.csv");
    ASSERT_EQ(run({"tc", "--n", "4", "--delta", "-1:1:0.5", "-o", a.string()}).code, 0);
    ASSERT_EQ(run({"tc", "--n", "4", "--delta", "-1:1:0.5", "-o", b.string()}).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(slurp(a).empty());
}

TEST(Cli, NmrStages) {
    const Result c = run({"nmr", "--stage", "C"});
    ASSERT_EQ(c.code, 0) << c.err;
    const json jc = json::parse(c.out);
    ASSERT_EQ(jc.at("stages").size(), 1U);
    bool found = false;
    for (const auto& t : jc.at("stages")[0].at("tangles"))
        if (t.at("sites") == json::array({2, 3, 4})) found = t.at("tau") == 1.0;
    EXPECT_TRUE(found);

    const json ja = json::parse(run({"nmr", "--stage", "A"}).out);
    const auto& a = ja.at("stages")[0];
    for (const auto& v : a.at("iconcurrence").at("single")) EXPECT_EQ(v.at("value"), 0.0);
    for (const auto& v : a.at("iconcurrence").at("pair")) EXPECT_EQ(v.at("value"), 0.0);
    for (const auto& v : a.at("concurrence")) EXPECT_EQ(v.at("value"), 0.0);

    EXPECT_EQ(json::parse(run({"nmr", "--all"}).out).at("stages").size(), 5U);
    EXPECT_EQ(json::parse(run({"nmr"}).out).at("stages").size(), 5U);
}

TEST(Cli, VerifySubset) {
    const Result r = run({"verify", "--only", "3,7"});
    EXPECT_EQ(r.code, 0) << r.out;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_EQ(rows[0].rfind("PASS  3", 0), 0U);
    EXPECT_EQ(rows[1].rfind("PASS  7", 0), 0U);
}

TEST(Cli, Help) {
    const Result r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("surface"), std::string::npos);
}
