#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gyrofdi/csv.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = GYROFDI_CLI;
const std::string kSrc = GYROFDI_SOURCE_DIR;

struct Result {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr discarded and returns exit code and stdout.
Result run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" + kCli + "' " + args + " 2>/dev/null";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gyrofdi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string out(const std::string& sub) const { return (dir_ / sub).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateWritesSchemasAndKeepsStdoutQuiet) {
    const Result r = run("simulate scenario1 --fault sx=0.5@56 --out " + out("a"));
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    for (const char* f : {"residuals.csv", "detection.csv", "hypotheses.csv", "hypothesis_series.csv", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    }
    const gyrofdi::CsvTable res = gyrofdi::read_csv_file(out("a/residuals.csv"));
    EXPECT_EQ(res.schema, "residuals");
    // first threshold crossing shortly after the 56 s activation
    const auto t = res.numeric("t");
    const auto ex = res.numeric("exceeds");
    double first = -1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (ex[i] > 0.5) {
            first = t[i];
            break;
        }
    }
    EXPECT_GT(first, 56.0);
    EXPECT_LT(first, 60.0);
    const gyrofdi::CsvTable det = gyrofdi::read_csv_file(out("a/detection.csv"));
    ASSERT_EQ(det.rows.size(), 1u);
    EXPECT_NEAR(det.numeric("t_fd")[0], 58.0, 2.0);
}

TEST_F(Cli, SimulateIsByteIdenticalForFixedSeed) {
    ASSERT_EQ(run("simulate --seed 42 --fault by=0.2@30 --out " + out("a")).code, 0);
    ASSERT_EQ(run("simulate --seed 42 --fault by=0.2@30 --out " + out("b")).code, 0);
    for (const char* f : {"residuals.csv", "hypotheses.csv", "hypothesis_series.csv", "detection.csv"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
    ASSERT_EQ(run("simulate --seed 43 --fault by=0.2@30 --out " + out("c")).code, 0);
    EXPECT_NE(slurp(dir_ / "a/residuals.csv"), slurp(dir_ / "c/residuals.csv"));
}

TEST_F(Cli, NoFaultNoDetectionRow) {
    ASSERT_EQ(run("simulate --out " + out("a")).code, 0);
    EXPECT_TRUE(gyrofdi::read_csv_file(out("a/detection.csv")).rows.empty());
}

TEST_F(Cli, StdoutFlagPrintsMainCsv) {
    const Result r = run("simulate --stdout --out " + out("a"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("# schema=residuals/1\n", 0), 0u);
    EXPECT_EQ(r.out, slurp(dir_ / "a/residuals.csv"));
}

TEST_F(Cli, EnvironmentSetsDefaultOutputDirectory) {
    ASSERT_EQ(run("bounds scenario2", "GYROFDI_OUT_DIR='" + out("env") + "'").code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "env/bounds_s.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "env/bounds_constants.csv"));
}

TEST_F(Cli, CampaignIdenticalAcrossWorkerCounts) {
    const std::string common = "campaign scenario1 --fault sx=0.5@56 --runs 8 --seed 5 -q";
    ASSERT_EQ(run(common + " --workers 1 --out " + out("w1")).code, 0);
    ASSERT_EQ(run(common + " --workers 3 --out " + out("w3")).code, 0);
    for (const char* f : {"campaign.csv", "campaign_summary.csv", "envelope.csv"}) {
        const std::string a = slurp(dir_ / "w1" / f);
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(a, slurp(dir_ / "w3" / f)) << f;
    }
    const gyrofdi::CsvTable runs = gyrofdi::read_csv_file(out("w1/campaign.csv"));
    EXPECT_EQ(runs.rows.size(), 8u);
}

TEST_F(Cli, SweepAndCalibrate) {
    ASSERT_EQ(run("sweep --param s --range 0:2:5 --out " + out("s")).code, 0);
    const gyrofdi::CsvTable sw = gyrofdi::read_csv_file(out("s/sweep.csv"));
    EXPECT_EQ(sw.schema, "sweep");
    EXPECT_EQ(sw.rows.size(), 5u);
    ASSERT_EQ(run("sweep --param delta_a --range 0.1,1 --out " + out("d")).code, 0);
    EXPECT_EQ(gyrofdi::read_csv_file(out("d/sweep.csv")).numeric("delta_a")[1], 1000.0);
    ASSERT_EQ(run("calibrate --runs 3 -q --out " + out("c")).code, 0);
    EXPECT_GT(gyrofdi::read_csv_file(out("c/calibration.csv")).numeric("threshold")[0], 0.0);
}

TEST_F(Cli, BoundsGrids) {
    ASSERT_EQ(run("bounds scenario2 --alpha 0.001,0.01,0.1 --beta 1 --out " + out("b")).code, 0);
    EXPECT_EQ(gyrofdi::read_csv_file(out("b/bounds_s.csv")).rows.size(), 3u);
    EXPECT_EQ(gyrofdi::read_csv_file(out("b/bounds_b.csv")).rows.size(), 1u);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("campaign --runs 0 --out " + out("x")).code, 1);
    EXPECT_EQ(run("simulate --no-such-flag").code, 1);
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("simulate /nonexistent.ini").code, 2);
    EXPECT_EQ(run("simulate --fault sq=1@3 --out " + out("x")).code, 2);
    EXPECT_EQ(run("bounds --alpha 2 --out " + out("x")).code, 2);

    std::ofstream bad(dir_ / "bad.ini");
    bad << "[orbit]\na_km = 6783\ne = 1.5\ni_deg = 0\nargp_deg = 0\nraan_deg = 0\nta_deg = 0\n";
    bad.close();
    EXPECT_EQ(run("simulate " + out("bad.ini")).code, 2);

    std::ofstream sub(dir_ / "sub.ini");
    // perigee 3 km below the surface, reached a few seconds after epoch
    sub << "[orbit]\na_km = 6783\ne = 0.06015\ni_deg = 0\nargp_deg = 0\nraan_deg = 0\nta_deg = 352\n";
    sub.close();
    EXPECT_EQ(run("simulate " + out("sub.ini") + " --out " + out("x")).code, 3);
}
