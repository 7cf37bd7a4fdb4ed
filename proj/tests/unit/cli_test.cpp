#include "cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace deba {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args, const char* env_seed = nullptr)
{
    args.insert(args.begin(), "deba-sim");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err, env_seed);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("deba_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
        std::ofstream(dir_ / "tiny.cfg") << "n_wbans = 4\nn_bs = 2\nduration = 12\nmode = deba-p1p2\n"
                                            "mobility.area_width = 500\nmobility.area_height = 500\n"
                                            "mobility.group_count = 2\n";
    }

    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const char* name) const { return (dir_ / name).string(); }

    static std::size_t lines(const std::string& file)
    {
        std::ifstream in(file);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    }

    static std::string slurp(const std::string& file)
    {
        std::ifstream in(file, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    fs::path dir_;
};

TEST_F(CliTest, MissingScenarioIsUsageError)
{
    const auto r = invoke({});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--scenario"), std::string::npos);
}

TEST_F(CliTest, UnknownFlagIsUsageError)
{
    const auto r = invoke({"--scenario", path("tiny.cfg"), "--turbo"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(CliTest, RunWritesEpochsPlusHeader)
{
    const auto r = invoke({"--scenario", path("tiny.cfg"), "--out", path("run.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(path("run.csv")), 13u);
    EXPECT_NE(r.out.find("total cost"), std::string::npos);
}

TEST_F(CliTest, EpochOverride)
{
    ASSERT_EQ(invoke({"--scenario", path("tiny.cfg"), "--epochs", "5", "--out", path("five.csv")}).code, 0);
    EXPECT_EQ(lines(path("five.csv")), 6u);
    EXPECT_EQ(invoke({"--scenario", path("tiny.cfg"), "--epochs", "0"}).code, 1);
}

TEST_F(CliTest, CompareReportsImprovements)
{
    const auto r = invoke({"--scenario", path("tiny.cfg"), "--mode", "deba-p1p2", "--compare", "no-opt", "--out",
                           path("pair.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("improvement"), std::string::npos);
    EXPECT_NE(r.out.find("energy consumed"), std::string::npos);
    EXPECT_NE(r.out.find("%"), std::string::npos);
    EXPECT_EQ(lines(path("pair.no-opt.csv")), 13u);
}

TEST_F(CliTest, BadModeIsConfigError)
{
    EXPECT_EQ(invoke({"--scenario", path("tiny.cfg"), "--mode", "ddml"}).code, 1);
    EXPECT_EQ(invoke({"--scenario", path("tiny.cfg"), "--compare", "ddml"}).code, 1);
}

TEST_F(CliTest, InvalidScenarioIsConfigError)
{
    std::ofstream(path("bad.cfg")) << "n_wbans = 0\n";
    const auto r = invoke({"--scenario", path("bad.cfg")});
    EXPECT_EQ(r.code, 1);
    std::ofstream(path("typo.cfg")) << "n_wbans = 3\nn_wban = 4\n";
    const auto t = invoke({"--scenario", path("typo.cfg")});
    EXPECT_EQ(t.code, 1);
    EXPECT_NE(t.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, MissingFileIsIoError)
{
    EXPECT_EQ(invoke({"--scenario", path("absent.cfg")}).code, 2);
}

TEST_F(CliTest, UnwritableOutputIsIoError)
{
    EXPECT_EQ(invoke({"--scenario", path("tiny.cfg"), "--out", "/nonexistent/deba/out.csv"}).code, 2);
}

TEST_F(CliTest, SeedPrecedence)
{
    ASSERT_EQ(invoke({"--scenario", path("tiny.cfg"), "--seed", "9", "--out", path("flag.csv")}).code, 0);
    ASSERT_EQ(invoke({"--scenario", path("tiny.cfg"), "--out", path("env.csv")}, "9").code, 0);
    ASSERT_EQ(invoke({"--scenario", path("tiny.cfg"), "--seed", "9", "--out", path("both.csv")}, "4").code, 0);
    ASSERT_EQ(invoke({"--scenario", path("tiny.cfg"), "--out", path("file.csv")}).code, 0);
    EXPECT_EQ(slurp(path("flag.csv")), slurp(path("env.csv")));
    EXPECT_EQ(slurp(path("flag.csv")), slurp(path("both.csv")));
    EXPECT_NE(slurp(path("flag.csv")), slurp(path("file.csv")));
    EXPECT_EQ(invoke({"--scenario", path("tiny.cfg")}, "nine").code, 1);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical)
{
    ASSERT_EQ(invoke({"--scenario", path("tiny.cfg"), "--out", path("a.csv")}).code, 0);
    ASSERT_EQ(invoke({"--scenario", path("tiny.cfg"), "--out", path("b.csv")}).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

} // namespace
} // namespace deba
