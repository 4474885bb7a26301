#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;  // stdout and stderr
};

CliRun run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + CLIFFKIT_CLI_PATH + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("cliffkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, VerifyAlgebraWritesTable) {
  const CliRun r = run("verify-algebra --n 2 --output-dir " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(dir / "verify-algebra.csv");
  int lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_EQ(lines, 5);  // header + 4 rows
  EXPECT_NE(csv.find("e1,e1,-e0,e12,-e2"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "verify-algebra.json"));
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("solve --help").code, 0);
}

TEST_F(Cli, UsageErrors) {
  CliRun r = run("");
  EXPECT_EQ(r.code, 1);
  r = run("fly");
  EXPECT_EQ(r.code, 1);
  r = run("solve --case nope --output-dir " + dir.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("'case'"), std::string::npos) << r.out;
  r = run("borel-pompeiu --field nope --output-dir " + dir.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("valid names"), std::string::npos) << r.out;
  r = run("convergence --resolutions 16,8 --output-dir " + dir.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("'resolutions'"), std::string::npos) << r.out;
}

TEST_F(Cli, MalformedConfigNamesField) {
  std::ofstream(dir / "bad.json") << "{\"experiment\": \"norm\", \"k\": \"two\"}";
  CliRun r = run("--config " + (dir / "bad.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("'k'"), std::string::npos) << r.out;
  std::ofstream(dir / "broken.json") << "{\n\"experiment\": \"norm\"\n\"k\": 2}";
  r = run("--config " + (dir / "broken.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line 3"), std::string::npos) << r.out;
}

TEST_F(Cli, ConfigWithOverridesAndEnvDir) {
  std::ofstream(dir / "cfg.json") << R"({"experiment": "verify-algebra", "n": 3, "output_dir": "/nonexistent/x"})";
  const fs::path env_dir = dir / "env";
  const CliRun r = run("--config " + (dir / "cfg.json").string() + " verify-algebra --n 1",
                    "CLIFFKIT_OUTPUT_DIR=" + env_dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(env_dir / "verify-algebra.csv"), "row,e0,e1\ne0,e0,e1\ne1,e1,-e0\n");
}

TEST_F(Cli, BorelPompeiuDumps) {
  const CliRun r = run("--dump-mesh --dump-field borel-pompeiu --resolution 16 --points 3 --output-dir " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"borel-pompeiu.json", "borel-pompeiu.csv", "mesh_volume.csv", "mesh_boundary.csv", "field.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_NE(slurp(dir / "borel-pompeiu.json").find("\"version\""), std::string::npos);
}
