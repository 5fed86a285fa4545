#include "cli/cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace scy::cli;

namespace {

int run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "scy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::path(::testing::TempDir()) / ("scy_cli_" + name);
    fs::remove_all(p);
    return p;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Config, UnknownKeyInFileIsConfigError) {
    auto dir = scratch("badkey");
    fs::create_directories(dir);
    write(dir / "bad.cfg", "# comment\nfoo = 1\n");
    EXPECT_THROW(read_config_file((dir / "bad.cfg").string()), ConfigError);
    EXPECT_EQ(run_args({"verify", "--config", (dir / "bad.cfg").string()}), kConfigError);
}

TEST(Config, BadValuesAndCommands) {
    EXPECT_EQ(run_args({"solve", "--n", "abc"}), kConfigError);
    EXPECT_EQ(run_args({"solve", "--n", "15"}), kConfigError);
    EXPECT_EQ(run_args({"solve", "--dim", "3"}), kConfigError);
    EXPECT_EQ(run_args({"solve", "--family", "gaussian"}), kConfigError);
    EXPECT_EQ(run_args({"solve", "--amplitude", "0.1,0.2"}), kConfigError);
    EXPECT_EQ(run_args({"sweep", "--amplitude", "-1"}), kConfigError);
    EXPECT_EQ(run_args({"verify", "--mutate", "NOPE"}), kConfigError);
    EXPECT_EQ(run_args({"explode"}), kConfigError);
    EXPECT_EQ(run_args({"solve", "--bogus", "1"}), kConfigError);
}

TEST(Config, ParsesAmplitudeLists) {
    EXPECT_EQ(parse_amplitudes("0,0.25, 1e-1"), (std::vector<double>{0.0, 0.25, 0.1}));
    EXPECT_THROW(parse_amplitudes("0.5,"), ConfigError);
    EXPECT_THROW(parse_amplitudes("0,5x"), ConfigError);
}

TEST(Config, FlagsOverrideFile) {
    auto dir = scratch("override");
    fs::create_directories(dir);
    write(dir / "run.cfg", "out = " + (dir / "from_file").string() + "\nn = 8\namplitude = 0\n");
    EXPECT_EQ(run_args({"solve", "--config", (dir / "run.cfg").string(), "--out", (dir / "from_flag").string()}), kOk);
    EXPECT_TRUE(fs::exists(dir / "from_flag" / "solve.csv"));
    EXPECT_FALSE(fs::exists(dir / "from_file"));
    auto rows = lines(slurp(dir / "from_flag" / "solve.csv"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].rfind("single-mode,0.0,8,", 0), 0u);
}

TEST(Verify, DefaultPassesAndMutationsFailExpectedCase) {
    auto dir = scratch("verify");
    EXPECT_EQ(run_args({"verify", "--out", dir.string()}), kOk);
    auto j = nlohmann::json::parse(slurp(dir / "verify.json"));
    EXPECT_GE(j["passed"].get<int>(), 17);
    EXPECT_EQ(j["failed"].get<int>(), 0);

    EXPECT_EQ(run_args({"verify", "--out", dir.string(), "--mutate", "LIST-volume-rewrite-off"}), kSymbolicFailure);
    j = nlohmann::json::parse(slurp(dir / "verify.json"));
    std::vector<std::string> failing;
    for (const auto& c : j["cases"])
        if (!c["pass"].get<bool>()) failing.push_back(c["id"]);
    EXPECT_EQ(failing, std::vector<std::string>{"ID-LIST"});
}

TEST(Solve, FlatRunAndByteStableRerun) {
    auto a = scratch("solve_a"), b = scratch("solve_b");
    for (const auto& d : {a, b})
        EXPECT_EQ(run_args({"solve", "--out", d.string(), "--family", "zero", "--amplitude", "0", "--n", "8"}), kOk);
    auto rows = lines(slurp(a / "solve.csv"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NE(rows[1].find(",2.0,0.0,2.0,"), std::string::npos) << rows[1];
    for (const char* f : {"solve.csv", "diagnostics.json", "phi.snap"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Solve, NonConvergenceExitsThreeWithArtifacts) {
    auto dir = scratch("solve_flag");
    EXPECT_EQ(run_args({"solve", "--out", dir.string(), "--family", "random-band", "--amplitude", "0.5", "--n", "8",
                        "--max-newton", "1", "--tol", "1e-15"}),
              kNumericalFlag);
    EXPECT_TRUE(fs::exists(dir / "phi.snap"));
    auto j = nlohmann::json::parse(slurp(dir / "diagnostics.json"));
    EXPECT_TRUE(j["flagged"].get<bool>());
    EXPECT_FALSE(j["converged"].get<bool>());
    EXPECT_TRUE(j["trace"].contains("trace"));
    EXPECT_NE(slurp(dir / "solve.csv").find(",true\n"), std::string::npos);
}

TEST(Sweep, RowsPerAmplitudeAndRerunIdentical) {
    auto a = scratch("sweep_a"), b = scratch("sweep_b");
    for (const auto& d : {a, b})
        EXPECT_EQ(run_args({"sweep", "--out", d.string(), "--amplitude", "0,0.5", "--n", "8", "--seed", "42"}), kOk);
    EXPECT_EQ(lines(slurp(a / "sweep.csv")).size(), 3u);
    EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
    EXPECT_EQ(slurp(a / "sweep.json"), slurp(b / "sweep.json"));
}

TEST(Check, MissingInputs) {
    auto dir = scratch("empty");
    EXPECT_EQ(run_args({"check", "--out", dir.string()}), kMissingInput);
    fs::create_directories(dir);
    EXPECT_EQ(run_args({"check", "--out", dir.string()}), kMissingInput);
}

TEST(Check, GoldenSummary) {
    const fs::path golden(SCY_GOLDEN_DIR);
    auto dir = scratch("golden");
    fs::copy(golden / "check_input", dir, fs::copy_options::recursive);
    EXPECT_EQ(run_args({"check", "--out", dir.string()}), kOk);
    EXPECT_EQ(slurp(dir / "summary.txt"), slurp(golden / "summary.txt"));
    EXPECT_EQ(emit_report(dir.string()), slurp(golden / "summary.txt"));
}
