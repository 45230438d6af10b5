// Drives the cubeadv binary end to end and checks the exit-code contract.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cubeadv_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int sh(const std::string& args) {
    const std::string cmd = std::string(CUBEADV_CLI) + " " + args + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, WarmupPipeline) {
  ASSERT_EQ(sh("family --d 3 --kind warmup --out " + path("f.json")), 0);
  ASSERT_EQ(sh("pack --in " + path("f.json") + " --eps 1/9 --out " + path("p.json")), 0);
  EXPECT_NE(slurp("p.json").find("\"weight\": \"3/2\""), std::string::npos);
  ASSERT_EQ(sh("instance --in " + path("p.json") + " --M 2 --scale full --out " + path("i.txt")), 0);
  EXPECT_EQ(slurp("i.txt"), "d=3 eps=1/9 M=2 mult=8\n2 32\n3 128\n");
  ASSERT_EQ(sh("instance --in " + path("p.json") + " --M 1 --scale reduced:1 --out " + path("r.txt")), 0);
  EXPECT_EQ(slurp("r.txt"), "d=3 eps=1/9 M=1 mult=8\n2 16\n3 64\n");

  ASSERT_EQ(sh("simulate --in " + path("i.txt") + " --mode counted --out " + path("a.json")), 0);
  ASSERT_EQ(sh("simulate --in " + path("i.txt") + " --mode peritem --cross-check --out " + path("b.json")), 0);
  EXPECT_EQ(slurp("a.json"), slurp("b.json"));
  EXPECT_NE(slurp("a.json").find("\"ratio\": \"3/2\""), std::string::npos);

  for (const char* f : {"f.json", "p.json", "i.txt", "r.txt", "a.json"}) {
    EXPECT_EQ(sh("verify --in " + path(f)), 0) << f;
  }
}

TEST_F(Cli, WarmupSixHasFiveExplicitCodes) {
  ASSERT_EQ(sh("family --d 6 --kind warmup --out " + path("f.json")), 0);
  const std::string text = slurp("f.json");
  std::size_t n = 0;
  for (auto pos = text.find("\"repr\": \"explicit\""); pos != std::string::npos;
       pos = text.find("\"repr\": \"explicit\"", pos + 1)) {
    ++n;
  }
  EXPECT_EQ(n, 5u);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(sh("family --d 1"), 5);
  EXPECT_EQ(sh("family"), 5);
  EXPECT_EQ(sh("bogus"), 5);
  ASSERT_EQ(sh("family --d 3 --kind warmup --out " + path("f.json")), 0);
  EXPECT_EQ(sh("pack --in " + path("f.json") + " --eps 1/2"), 5);
  EXPECT_EQ(sh("pack --in " + path("missing.json")), 1);
  ASSERT_EQ(sh("pack --in " + path("f.json") + " --out " + path("p.json")), 0);
  ASSERT_EQ(sh("instance --in " + path("p.json") + " --out " + path("i.txt")), 0);
  EXPECT_EQ(sh("simulate --in " + path("i.txt") + " --alg FirstFit"), 5);
  EXPECT_EQ(sh("family --d 1000 --seed 42 --max-attempts 1"), 2);
}

TEST_F(Cli, LowerBoundPackingNeedsExactness) {
  ASSERT_EQ(sh("family --d 1000 --seed 42 --out " + path("f.json")), 0);
  ASSERT_EQ(sh("pack --in " + path("f.json") + " --out " + path("p.json")), 0);
  EXPECT_NE(slurp("p.json").find("\"weightKind\": \"lowerBound\""), std::string::npos);
  EXPECT_EQ(sh("instance --in " + path("p.json") + " --M 1"), 4);
  EXPECT_EQ(sh("verify --in " + path("f.json")), 0);
  EXPECT_EQ(sh("verify --in " + path("p.json")), 0);
}

TEST_F(Cli, TamperedFilesFailVerification) {
  ASSERT_EQ(sh("family --d 3 --kind warmup --out " + path("f.json")), 0);
  ASSERT_EQ(sh("pack --in " + path("f.json") + " --out " + path("p.json")), 0);
  std::string p = slurp("p.json");
  p.replace(p.find("\"weight\": \"3/2\""), 15, "\"weight\": \"2/1\"");
  std::ofstream(path("bad.json")) << p;
  EXPECT_EQ(sh("verify --in " + path("bad.json")), 3);

  std::string f = slurp("f.json");
  f.replace(f.find("\"count\": \"4\""), 12, "\"count\": \"9\"");
  std::ofstream(path("badf.json")) << f;
  EXPECT_EQ(sh("verify --in " + path("badf.json")), 3);
}

TEST_F(Cli, ReportWritesCsvAndJson) {
  ASSERT_EQ(sh("report --range 200:400:200 --seed 42 --threads 2 --out " + path("r.csv")), 0);
  const std::string csv = slurp("r.csv");
  EXPECT_EQ(csv.rfind("d,S,certifiedWeight,targetD5lnD,centralLemmaHolds,ratioLB\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_TRUE(fs::exists(path("r.json")));
  EXPECT_EQ(sh("verify --in " + path("r.csv")), 0);
  EXPECT_EQ(sh("verify --in " + path("r.json")), 0);
  ASSERT_EQ(sh("report --range 10:5 --out " + path("e.csv")), 0);
  EXPECT_EQ(slurp("e.csv"), "d,S,certifiedWeight,targetD5lnD,centralLemmaHolds,ratioLB\n");
}
