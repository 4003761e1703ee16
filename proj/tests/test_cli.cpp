#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "smc2/cli.hpp"
#include "test_util.hpp"

using namespace smc2;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smc2");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& rel) { return std::string(CORPUS_DIR) + "/" + rel; }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("smc2_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_program(const std::string& name, const std::string& src) {
  fs::path p = scratch(name) / (name + ".sc");
  std::ofstream(p) << src;
  return p;
}

}  // namespace

TEST(Cli, EraseHasNoLabels) {
  auto r = cli({"erase", corpus("paygap.sc")});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  EXPECT_EQ(r.out.find("private"), std::string::npos);
  EXPECT_NE(r.out.find("mcinput"), std::string::npos);
}

TEST(Cli, RunPaygapWritesPartyFiles) {
  fs::path dir = scratch("paygap");
  auto r = cli({"run", corpus("paygap.sc"), "-q", "3", "--seed", "7", "--inputs", corpus("inputs/paygap/a"),
                "--out-dir", dir.string()});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  EXPECT_EQ(file(dir / "out.party1.txt"), "avgA = 110\navgB = 85\n");
  EXPECT_EQ(file(dir / "out.party2.txt"), "avgA = 110\navgB = 85\n");
  EXPECT_EQ(file(dir / "out.party3.txt"), "");
  EXPECT_TRUE(fs::exists(dir / "trace.d"));
  EXPECT_TRUE(fs::exists(dir / "trace.l"));
  EXPECT_TRUE(fs::exists(dir / "psi.json"));

  fs::path vdir = scratch("paygap_vanilla");
  auto v = cli({"run-vanilla", corpus("paygap.sc"), "--inputs", corpus("inputs/paygap/a"), "--out-dir", vdir.string()});
  ASSERT_EQ(v.code, kExitPass) << v.err;
  EXPECT_EQ(file(vdir / "out.party1.txt"), file(dir / "out.party1.txt"));
}

TEST(Cli, TraceFilesArePartyTagged) {
  fs::path dir = scratch("trace");
  ASSERT_EQ(cli({"run", corpus("simple_correct.sc"), "--out-dir", dir.string()}).code, kExitPass);
  std::istringstream d(file(dir / "trace.d"));
  std::string line;
  std::set<std::string> parties;
  while (std::getline(d, line)) parties.insert(line.substr(0, line.find(' ')));
  EXPECT_EQ(parties, (std::set<std::string>{"1", "2", "3"}));
}

TEST(Cli, PsiLogRecordsMultiLocationFree) {
  fs::path dir = scratch("psi");
  ASSERT_EQ(cli({"run", corpus("pfree_shared.sc"), "--inputs", corpus("inputs/pfree_shared/b"), "--out-dir",
                 dir.string()})
                .code,
            kExitPass);
  EXPECT_NE(file(dir / "psi.json").find("\"block\""), std::string::npos);
  EXPECT_EQ(file(dir / "out.party1.txt"), "x = 10\n");
}

TEST(Cli, SeedFromEnvironmentIsDeterministic) {
  fs::path a = scratch("seed_a");
  fs::path b = scratch("seed_b");
  ::setenv("SMC2_SEED", "7", 1);
  auto ra = cli({"run", corpus("pointer_challenge.sc"), "--seed", "1", "--out-dir", a.string()});
  ::unsetenv("SMC2_SEED");
  auto rb = cli({"run", corpus("pointer_challenge.sc"), "--seed", "7", "--out-dir", b.string()});
  ASSERT_EQ(ra.code, kExitPass);
  ASSERT_EQ(rb.code, kExitPass);
  EXPECT_EQ(file(a / "trace.d"), file(b / "trace.d"));
  EXPECT_EQ(file(a / "trace.l"), file(b / "trace.l"));
}

TEST(Cli, CountRoundsResolutionCost) {
  fs::path dir = scratch("rounds");
  auto block = cli({"run", corpus("resolution_cost.sc"), "--count-rounds", "--out-dir", dir.string()});
  auto legacy =
      cli({"run", corpus("resolution_cost.sc"), "--count-rounds", "--legacy-per-statement", "--out-dir", dir.string()});
  EXPECT_NE(block.out.find("resolve=2 "), std::string::npos) << block.out;
  EXPECT_NE(legacy.out.find("resolve=8 "), std::string::npos) << legacy.out;
}

TEST(Cli, CountRoundsSmallPrograms) {
  fs::path pub = write_program("public_only", "public int a = 1, b; b = a + 2;");
  auto r = cli({"run", pub.string(), "--count-rounds", "--out-dir", pub.parent_path().string()});
  EXPECT_NE(r.out.find("mult=0 cmp=0 div=0 ar=0 aw=0 dv=0 free=0 resolve=0 rounds=0"), std::string::npos) << r.out;
  fs::path mul = write_program("one_mult", "private int a = 2, b = 3, c; c = a * b;");
  r = cli({"run", mul.string(), "--count-rounds", "--out-dir", mul.parent_path().string()});
  EXPECT_NE(r.out.find("mult=1 "), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"run"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", corpus("simple_correct.sc"), "--tracking", "sideways"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitPass);

  fs::path dir = scratch("faults");
  auto fault = cli({"run", corpus("oblivious/fault_public_assign.sc"), "--inputs", corpus("inputs/oblivious/a"),
                    "--out-dir", dir.string()});
  EXPECT_EQ(fault.code, kExitFault);
  EXPECT_NE(fault.err.find("ObliviousFault"), std::string::npos);
  EXPECT_EQ(cli({"run", (dir / "missing.sc").string()}).code, kExitFault);
  EXPECT_EQ(cli({"check-correct", corpus("oblivious/fault_output.sc"), "--inputs", corpus("inputs/oblivious/a")}).code,
            kExitFault);
}

TEST(Cli, CheckCorrect) {
  auto r = cli({"check-correct", corpus("nested_if.sc"), "--inputs", corpus("inputs/nested_if/b")});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_EQ(r.out.rfind("CHECK nested_if.correct PASS", 0), 0u) << r.out;
  auto skip = cli({"check-correct", corpus("oob_misaligned.sc"), "--inputs", corpus("inputs/oob_misaligned/a")});
  EXPECT_EQ(skip.code, kExitPass);
  EXPECT_NE(skip.out.find("SKIP"), std::string::npos);
}

TEST(Cli, CheckNi) {
  auto r = cli({"check-ni", corpus("paygap.sc"), "--inputs", corpus("inputs/paygap/a"), "--alt-inputs",
                corpus("inputs/paygap/b"), corpus("inputs/paygap/c")});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST(Cli, CheckAllShippedCorpus) {
  auto r = cli({"check-all"});
  EXPECT_EQ(r.code, kExitPass) << r.out;
  EXPECT_EQ(r.out.find(" FAIL"), std::string::npos) << r.out;
}

TEST(Manifest, LoadsEntries) {
  Corpus c = load_manifest(corpus("manifest.json"));
  std::size_t faults = 0, skips = 0;
  for (const auto& e : c.entries) {
    faults += e.expect == Expect::ObliviousFault;
    skips += e.expect == Expect::Skip;
    EXPECT_TRUE(fs::exists(c.root / e.program)) << e.program;
  }
  EXPECT_EQ(faults, 10u);
  EXPECT_EQ(skips, 1u);
}
