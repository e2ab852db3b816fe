#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hvem/config.hpp"

namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code = -1;
    std::string output;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(HVEM_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p))
        r.output += buf;
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("hvem_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }

    fs::path dir;
};

} // namespace

TEST_F(CliTest, MeshGenWritesLoadableMesh)
{
    const auto r = run("mesh-gen --family cartesian --n 3 --out " + path("m.json"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto j = nlohmann::json::parse(slurp(path("m.json")));
    EXPECT_EQ(j["vertices"].size(), 16u);
    EXPECT_EQ(j["elements"].size(), 9u);
}

TEST_F(CliTest, SolveConstantIsExact)
{
    ASSERT_EQ(run("mesh-gen --family voronoi --n 3 --out " + path("m.json")).code, 0);
    const auto r = run("solve --mesh " + path("m.json") + " --p 3 --g const:1 --out " + path("s.json"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto j = nlohmann::json::parse(slurp(path("s.json")));
    for (const auto& e : j["elements"]) {
        EXPECT_NEAR(e["coeffs"][0].get<double>(), 1.0, 1e-10);
        for (std::size_t a = 1; a < e["coeffs"].size(); ++a)
            EXPECT_NEAR(e["coeffs"][a].get<double>(), 0.0, 1e-10);
    }
    EXPECT_LT(j["errors"]["relH1"].get<double>(), 1e-10);
}

TEST_F(CliTest, HpSolveOnGradedMesh)
{
    ASSERT_EQ(run("mesh-gen --family graded-a --n 3 --sigma 0.2 --out " + path("m.json")).code, 0);
    const auto r = run("solve --mesh " + path("m.json") + " --hp --mu 1 --corner 0 0 --g u3");
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("max degree 4"), std::string::npos) << r.output;
}

TEST_F(CliTest, PStudyWritesOneRowPerDegree)
{
    const auto r = run("study --kind p --u u1 --family cartesian --n 2 --pmax 10 --out " + path("p.csv"));
    ASSERT_EQ(r.code, 0) << r.output;
    std::istringstream is(slurp(path("p.csv")));
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "kind,family,u,level,h,p_max,dofs,relL2,relH1,cond");
    int rows = 0;
    while (std::getline(is, line))
        ++rows;
    EXPECT_EQ(rows, 10);
}

TEST_F(CliTest, StudyIsDeterministic)
{
    const std::string args = "study --kind h --family voronoi --n 2 --levels 2 --p 2 --out ";
    ASSERT_EQ(run(args + path("a.csv")).code, 0);
    ASSERT_EQ(run(args + path("b.csv")).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, ValidatePassesCartesian)
{
    ASSERT_EQ(run("mesh-gen --family cartesian --n 4 --out " + path("m.json")).code, 0);
    const auto r = run("validate --mesh " + path("m.json"));
    EXPECT_EQ(r.code, 0) << r.output;
}

TEST_F(CliTest, ValidateFlagsNeedleElement)
{
    std::ofstream(path("needle.json"))
        << R"({"vertices":[[0,0],[1,0],[1,0.001],[0,1]],"elements":[[0,1,2,3]]})";
    const auto r = run("validate --mesh " + path("needle.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("FAIL D1"), std::string::npos) << r.output;
}

TEST_F(CliTest, ValidateQuasiUniformityOnGradedMesh)
{
    ASSERT_EQ(run("mesh-gen --family graded-a --n 4 --sigma 0.2 --out " + path("m.json")).code, 0);
    EXPECT_EQ(run("validate --mesh " + path("m.json") + " --rho1 0.01").code, 0);
    const auto r = run("validate --mesh " + path("m.json") + " --rho1 0.01 --check-quasi-uniform");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("FAIL D4"), std::string::npos) << r.output;
}

TEST_F(CliTest, MalformedJsonReportsOffset)
{
    std::ofstream(path("bad.json")) << R"({"vertices": [[0,0], })";
    const auto r = run("validate --mesh " + path("bad.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("byte"), std::string::npos) << r.output;
}

TEST_F(CliTest, UsageErrors)
{
    EXPECT_EQ(run("mesh-gen --bogus 3").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("mesh-gen --family hexagons --out " + path("m.json")).code, 1);
    EXPECT_EQ(run("solve --mesh " + path("missing.json")).code, 1);
}

TEST_F(CliTest, SavedConfigReplays)
{
    ASSERT_EQ(run("mesh-gen --family cartesian --n 2 --out " + path("m.json")).code, 0);
    const auto a = run("solve --mesh " + path("m.json") + " --p 3 --g u1 --save-config " + path("c.json"));
    ASSERT_EQ(a.code, 0) << a.output;
    const auto cfg = hvem::load_config(path("c.json"));
    EXPECT_EQ(cfg.command, "solve");
    EXPECT_EQ(cfg.p, 3);
    const auto b = run("--config " + path("c.json") + " solve");
    ASSERT_EQ(b.code, 0) << b.output;
    EXPECT_EQ(a.output, b.output);
}

TEST(RunConfig, JsonRoundTrip)
{
    hvem::RunConfig c;
    c.command = "study";
    c.kind = "hp";
    c.sigma = 0.17;
    c.corner = {0.25, -1.0};
    c.levels = 6;
    c.check_quasi_uniform = true;
    c.residual_tolerance = 1e-9;
    const auto back = nlohmann::json::parse(nlohmann::json(c).dump()).get<hvem::RunConfig>();
    EXPECT_EQ(back, c);
    EXPECT_EQ(nlohmann::json::parse(R"({"p": 5})").get<hvem::RunConfig>().pmax, 10);
}
