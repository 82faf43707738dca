#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include "pwsharp_cli/cli.hpp"
#include "pwsharp_cli/output.hpp"

using namespace pwsharp::cli;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

// In-process run without touching any on-disk cache.
Outcome run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "--no-cache");
    std::ostringstream out, err;
    Outcome o;
    o.code = run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

// Runs the installed binary in a fresh process with the cache at `cache`.
Outcome run_process(const std::string& args, const fs::path& cache) {
    const fs::path err_file = fs::temp_directory_path() / "pwsharp_cli_test_stderr.txt";
    const std::string cmd = "PWSHARP_ZERO_CACHE='" + cache.string() + "' '" PWSHARP_TOOL_PATH "' " + args +
                            " 2>'" + err_file.string() + "'";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        ADD_FAILURE() << "popen failed";
        return o;
    }
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        o.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err_file);
    o.err.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return o;
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("pwsharp_cli_test_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
    static inline int counter_ = 0;
};

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST(CliOutput, NumbersRoundTrip) {
    for (double v : {std::numbers::pi, 0.1, 1e-300, -2.5e17, 1.0 / 3.0}) {
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
    EXPECT_EQ(format_number(0.1).size(), 19u);  // 0.10000000000000001
    EXPECT_EQ(json_number(std::nan("")), "null");
    EXPECT_EQ(json_number(INFINITY), "null");
    EXPECT_EQ(json_escape("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
    EXPECT_EQ(csv_line({"a", "b,c", "d\"e"}), "a,\"b,c\",\"d\"\"e\"");
    JsonObject o;
    o.add("z", 1).add("a", 2.5).add("s", "x").add("v", std::vector<double>{1.0, 2.0});
    EXPECT_EQ(o.str(), "{\"z\":1,\"a\":2.5,\"s\":\"x\",\"v\":[1,2]}");
}

TEST(Cli, ConstantJson) {
    Outcome o = run_args({"constant", "--beta", "-0.5", "--k", "3"});
    ASSERT_EQ(o.code, exit_ok) << o.err;
    json j = json::parse(o.out);
    EXPECT_NEAR(j["lambda0"].get<double>(), std::numbers::pi, 1e-9);
    EXPECT_EQ(j["k"].get<int>(), 3);
    EXPECT_EQ(j["form"].get<std::string>(), "determinant");
    EXPECT_LE(j["bracket"][1].get<double>() - j["bracket"][0].get<double>(), 1e-11);
}

TEST(Cli, ConstantDeltaScaling) {
    json a = json::parse(run_args({"constant", "--beta", "0", "--k", "2"}).out);
    json b = json::parse(run_args({"constant", "--beta", "0", "--k", "2", "--delta", "2"}).out);
    EXPECT_NEAR(b["ep1"].get<double>() / a["ep1"].get<double>(), std::pow(2.0, -4), 1e-15);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_args({"constant", "--k", "0"}).code, exit_error);
    EXPECT_EQ(run_args({"ep2", "--d", "3"}).code, exit_error);
    EXPECT_EQ(run_args({}).code, exit_usage);
    EXPECT_EQ(run_args({"bogus"}).code, exit_usage);
    EXPECT_EQ(run_args({"constant", "--nope", "1"}).code, exit_usage);
    EXPECT_EQ(run_args({"--format", "xml", "constant"}).code, exit_usage);
    EXPECT_EQ(run_args({"--help"}).code, exit_ok);
}

TEST(Cli, ErrorsAreJsonObjects) {
    Outcome o = run_args({"ep2", "--d", "3"});
    json j = json::parse(o.out);
    EXPECT_EQ(j["error"]["kind"].get<std::string>(), "OddDimension");
    o = run_args({"constant", "--beta", "-1"});
    EXPECT_EQ(o.code, exit_error);
    EXPECT_EQ(json::parse(o.out)["error"]["kind"].get<std::string>(), "DomainError");
}

TEST(Cli, DeterministicOutput) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"constant", "--beta", "1", "--k", "5"},
             {"--format", "json", "table", "--kind", "ep2", "--from", "2", "--to", "6"},
             {"asymptotics", "--betas", "-0.5,0", "--kmax", "3"},
             {"extremizer", "--k", "4", "--samples", "7"}}) {
        Outcome a = run_args(args);
        Outcome b = run_args(args);
        ASSERT_EQ(a.code, exit_ok) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, BetaHalfTableCsv) {
    Outcome o = run_args({"table", "--from", "1", "--to", "7"});
    ASSERT_EQ(o.code, exit_ok) << o.err;
    auto lines = lines_of(o.out);
    ASSERT_EQ(lines.size(), 8u);
    EXPECT_EQ(lines[0], "k,lambda0,reference,agrees,status");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        EXPECT_NE(lines[i].find(",yes,ok"), std::string::npos) << lines[i];
    }
}

TEST(Cli, Ep2TableJson) {
    Outcome o = run_args({"--format", "json", "table", "--kind", "ep2", "--from", "2", "--to", "16"});
    ASSERT_EQ(o.code, exit_ok) << o.err;
    json j = json::parse(o.out);
    ASSERT_EQ(j.size(), 8u);
    for (const auto& row : j) {
        EXPECT_TRUE(row["agrees"].get<bool>()) << row.dump();
        const int d = row["d"].get<int>();
        EXPECT_NEAR(std::pow(row["ep2"].get<double>(), 1.0 / d), row["ep2_root"].get<double>(), 1e-12);
    }
}

TEST(Cli, ExtremizerSamplesAreEven) {
    Outcome o = run_args({"extremizer", "--k", "3", "--x-min", "-4", "--x-max", "4", "--samples", "9", "--N", "100"});
    ASSERT_EQ(o.code, exit_ok) << o.err;
    auto lines = lines_of(o.out);
    ASSERT_EQ(lines.size(), 10u);
    EXPECT_EQ(lines[0], "x,re_f,im_f");
    std::vector<double> x, f;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::string a, b;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        x.push_back(std::stod(a));
        f.push_back(std::stod(b));
    }
    for (int i = 0; i < 9; ++i) {
        EXPECT_EQ(x[i], -x[8 - i]);
        EXPECT_NEAR(f[i], f[8 - i], 1e-12 * std::abs(f[i]));
    }
}

TEST(Cli, ExtremizerCoefficientsJson) {
    Outcome o = run_args({"--format", "json", "extremizer", "--beta", "-0.5", "--k", "3"});
    ASSERT_EQ(o.code, exit_ok) << o.err;
    json j = json::parse(o.out);
    ASSERT_EQ(j["a"].size(), 400u);
    EXPECT_EQ(j["a"][0].get<double>(), 1.0);
    EXPECT_NEAR(j["rayleigh_quotient"].get<double>() / std::pow(std::numbers::pi, 6), 1.0, 1e-6);
    EXPECT_LE(j["constraint_residuals"][0].get<double>(), 1e-6);
    EXPECT_TRUE(j["multiplicity_warning"].is_null());
}

TEST(Cli, OracleAndPoincare) {
    json fd = json::parse(run_args({"oracle", "--kind", "fd", "--m", "1"}).out);
    EXPECT_NEAR(fd["value"].get<double>(), std::numbers::pi * std::numbers::pi / 4, 1e-3);
    json gal = json::parse(run_args({"oracle", "--kind", "galerkin", "--beta", "-0.5", "--k", "3"}).out);
    EXPECT_FALSE(gal.contains("error")) << gal.dump();
    json p = json::parse(run_args({"poincare", "--m", "2", "--n", "1"}).out);
    EXPECT_NEAR(p["constant"].get<double>(), 1 / (std::numbers::pi * std::numbers::pi), 1e-10);
    json lap = json::parse(run_args({"poincare", "--m", "0", "--n", "0", "--d", "3", "--m1", "1"}).out);
    EXPECT_NEAR(lap["constant"].get<double>(), 1 / (std::numbers::pi * std::numbers::pi), 1e-10);
}

TEST(Cli, Selftest) {
    Outcome o = run_args({"selftest"});
    EXPECT_EQ(o.code, exit_ok) << o.out;
}

TEST(CliProcess, WarmCacheMatchesColdCacheBitForBit) {
    TempDir dir;
    const fs::path cache = dir.path() / "zeros.json";
    const std::string args = "constant --beta 2.5 --k 6";
    Outcome cold = run_process(args, cache);
    ASSERT_EQ(cold.code, 0) << cold.err;
    ASSERT_TRUE(fs::exists(cache));
    json doc = json::parse(std::ifstream(cache));
    EXPECT_EQ(doc["format_version"].get<int>(), 1);
    EXPECT_FALSE(doc["entries"].empty());

    Outcome warm = run_process(args, cache);
    ASSERT_EQ(warm.code, 0) << warm.err;
    EXPECT_EQ(warm.out, cold.out);
    Outcome none = run_process("--no-cache " + args, cache);
    EXPECT_EQ(none.out, cold.out);

    const std::string table = "table --kind ep2 --from 2 --to 8";
    Outcome t_cold = run_process(table, dir.path() / "other.json");
    Outcome t_warm = run_process(table, dir.path() / "other.json");
    EXPECT_EQ(t_cold.out, t_warm.out);
}

TEST(CliProcess, CorruptCacheIsRebuilt) {
    TempDir dir;
    const fs::path cache = dir.path() / "zeros.json";
    const std::string args = "constant --beta 0 --k 4";
    Outcome clean = run_process(args, dir.path() / "clean.json");
    {
        std::ofstream f(cache);
        f << "{\"format_version\": 1, \"entries\": [{\"nu\": 0, \"n\": 1, \"zero\": tru";
    }
    Outcome o = run_process(args, cache);
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, clean.out);
    EXPECT_NE(o.err.find("rebuilding"), std::string::npos) << o.err;
    json doc = json::parse(std::ifstream(cache));
    EXPECT_FALSE(doc["entries"].empty());

    // A cache from another format version is ignored rather than trusted.
    {
        std::ofstream f(cache);
        f << "{\"format_version\": 99, \"entries\": [{\"nu\": 0, \"n\": 1, \"zero\": 7.0}]}";
    }
    Outcome v = run_process(args, cache);
    EXPECT_EQ(v.out, clean.out);
}
