#include "cli_app.hpp"
#include "cli_config.hpp"

#include "fracback/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace fracback;
using namespace fracback::cli;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args, const char* env = nullptr) {
    args.insert(args.begin(), "fracback");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, env);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("fracback_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(CliMl, Values) {
    Outcome r = run({"ml", "--alpha", "1", "--beta", "1", "--x", "-1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0.367879441171442\n");
    r = run({"ml", "--alpha", "0.7", "--x", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1\n");
}

TEST(CliMl, DomainErrorExitCode) {
    const Outcome r = run({"ml", "--alpha", "1.5", "--x", "-1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;
}

TEST(CliUsage, Errors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"ml", "--alpha", "0.5"}).code, 2);
    EXPECT_EQ(run({"--singular-mode", "fancy", "ml", "--alpha", "0.5", "--x", "-1"}).code, 2);
    EXPECT_EQ(run({"table", "--id", "4"}).code, 2);
}

TEST(CliUsage, HelpForEverySubcommand) {
    EXPECT_EQ(run({"--help"}).code, 0);
    for (const char* sub : {"ml", "forward", "backward", "table", "fig4", "diagnose"}) {
        const Outcome r = run({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_FALSE(r.out.empty()) << sub;
    }
}

TEST(CliForward, ZeroTimeEqualsInitialField) {
    const auto dir = fresh("fwd0");
    const Outcome r = run({"--out", dir.string(), "forward", "--t", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir / "forward.csv"), slurp(dir / "u0.csv"));
    EXPECT_EQ(slurp(dir / "u0.csv").rfind("m,n,coeff\n", 0), 0u);
}

TEST(CliBackward, FinalTimeEqualsData) {
    const auto dir = fresh("bwd1");
    const Outcome r = run({"--out", dir.string(), "backward", "--t", "1.0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir / "backward.csv"), slurp(dir / "g.csv"));
}

TEST(CliBackward, ZeroTimeWarns) {
    const auto dir = fresh("bwd0");
    const Outcome r = run({"--out", dir.string(), "backward", "--t", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("unregularized inversion"), std::string::npos);
}

TEST(CliBackward, TimeOutOfRange) {
    const auto dir = fresh("bwd_range");
    EXPECT_EQ(run({"--out", dir.string(), "backward", "--t", "1.5"}).code, 2);
    EXPECT_EQ(run({"--out", dir.string(), "forward", "--t", "-0.5"}).code, 2);
    EXPECT_EQ(run({"--out", dir.string(), "backward", "--delta", "4"}).code, 2);
}

TEST(CliBackward, ReadsInputField) {
    const auto dir = fresh("bwd_in");
    ASSERT_EQ(run({"--out", dir.string(), "backward", "--t", "1"}).code, 0);
    const auto dir2 = fresh("bwd_in2");
    const Outcome r = run({"--out", dir2.string(), "backward", "--t", "1", "--input", (dir / "g.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir2 / "backward.csv"), slurp(dir / "g.csv"));
    EXPECT_EQ(run({"backward", "--t", "1", "--input", (dir / "nope.csv").string()}).code, 3);
}

TEST(CliIo, UnwritableOutput) {
    EXPECT_EQ(run({"--out", "/proc/fracback/none", "forward", "--t", "0.5"}).code, 3);
    EXPECT_EQ(run({"--config", "/nonexistent/cfg.json", "ml", "--alpha", "1", "--x", "0"}).code, 3);
}

TEST(CliIo, EnvironmentFallback) {
    const auto dir = fresh("env");
    const Outcome r = run({"forward", "--t", "0.25"}, dir.string().c_str());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "forward.csv"));
}

TEST(CliTable, AnchorCellAndDeterminism) {
    const auto a = fresh("tab_a");
    const auto b = fresh("tab_b");
    const Outcome ra = run({"--out", a.string(), "table", "--id", "1", "--alpha", "0.8"});
    const Outcome rb = run({"--out", b.string(), "--threads", "2", "table", "--id", "1", "--alpha", "0.8"});
    ASSERT_EQ(ra.code, 0) << ra.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    for (const char* f : {"table1.csv", "table1.meta", "table1.gp"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    std::istringstream csv(slurp(a / "table1.csv"));
    std::string header;
    std::string first;
    std::getline(csv, header);
    std::getline(csv, first);
    EXPECT_EQ(header, "level,alpha_0.8");
    const double cell = std::stod(first.substr(first.find(',') + 1));
    EXPECT_NEAR(cell, 3.8800e-1, 0.05 * 3.8800e-1);
}

TEST(CliTable, ParameterChoiceFailureNamesLevel) {
    const auto dir = fresh("tab_bad");
    fs::create_directories(dir);
    std::ofstream(dir / "cfg.json") << R"({"alphas": [0.5], "truncation": 5, "levels": [3.5, 1e-3, 1e-4]})";
    const Outcome r = run({"--config", (dir / "cfg.json").string(), "--out", dir.string(), "table", "--id", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("3.5"), std::string::npos) << r.err;
}

TEST(CliFig4, PrintsConstant) {
    const auto dir = fresh("fig4");
    const Outcome r = run({"--out", dir.string(), "fig4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto pos = r.out.find("C=");
    ASSERT_NE(pos, std::string::npos);
    const double c = std::stod(r.out.substr(pos + 2));
    EXPECT_GT(c, 13.7);
    EXPECT_LT(c, 16.7);
    EXPECT_TRUE(fs::exists(dir / "fig4.gp"));
}

TEST(CliDiagnose, ExactDataIsBounded) {
    const auto dir = fresh("diag");
    Outcome r = run({"--out", dir.string(), "diagnose"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("classification: bounded"), std::string::npos) << r.out;
    r = run({"--out", dir.string(), "diagnose", "--delta", "1e-3"});
    EXPECT_NE(r.out.find("classification: growing"), std::string::npos) << r.out;
}

TEST(CliConfig, DefaultsAndOverrides) {
    const CliConfig c = parse_config("{}");
    EXPECT_EQ(c.experiment.truncation, 30);
    EXPECT_EQ(c.experiment.quad_points, 4);
    EXPECT_EQ(c.experiment.spatial_subintervals, 4);
    EXPECT_EQ(c.experiment.alphas, (std::vector<double>{0.2, 0.4, 0.6, 0.8}));
    const CliConfig d = parse_config(R"({"alphas": [0.3], "singular_mode": "graded", "out_dir": "x", "seed": 4})");
    EXPECT_EQ(d.experiment.alphas, std::vector<double>{0.3});
    EXPECT_EQ(d.experiment.singular_mode, SingularMode::graded_substitution);
    EXPECT_EQ(d.out_dir, "x");
    EXPECT_EQ(d.experiment.seed, 4u);
}

TEST(CliConfig, Strict) {
    EXPECT_THROW(parse_config(R"({"truncaton": 30})"), DomainError);
    EXPECT_THROW(parse_config(R"({"truncation": "30"})"), DomainError);
    EXPECT_THROW(parse_config(R"({"alphas": 0.5})"), DomainError);
    EXPECT_THROW(parse_config("[1, 2]"), DomainError);
    EXPECT_THROW(parse_config("{not json"), DomainError);
    EXPECT_THROW(parse_config(R"({"truncation": 0})"), DomainError);
}

TEST(CliConfig, OutputDirectoryPrecedence) {
    EXPECT_EQ(resolve_out_dir("flag", "cfg", "env"), "flag");
    EXPECT_EQ(resolve_out_dir("", "cfg", "env"), "cfg");
    EXPECT_EQ(resolve_out_dir("", "", "env"), "env");
    EXPECT_EQ(resolve_out_dir("", "", nullptr), ".");
}
