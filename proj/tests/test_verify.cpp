#include <gtest/gtest.h>

#include <chrono>

#include "smc2/parser.hpp"
#include "smc2/verify.hpp"
#include "test_util.hpp"

using namespace smc2;

namespace {

Program smc(const std::string& src) { return parse(src, {Dialect::Smc2, true}); }

InputSet party_inputs(const std::string& p1, const std::string& p2) {
  InputSet in;
  in.add_party(1, p1);
  in.add_party(2, p2);
  in.add_party(3, "");
  return in;
}

const char* kFigures[] = {"simple_correct.sc", "simple_pointer.sc", "pointer_challenge.sc", "array_challenge.sc",
                          "resolution_cost.sc"};

const char* kCompare =
    "private int a, b, c = 0;"
    "smcinput(a, 1); smcinput(b, 2);"
    "if (a < b) { c = a; } else { c = b; }"
    "smcoutput(c, 1);";

}  // namespace

TEST(Format, ReportLine) {
  EXPECT_EQ(format({"x", Verdict::Pass, "3 codes"}), "CHECK x PASS 3 codes");
  EXPECT_EQ(format({"y", Verdict::Skip, ""}), "CHECK y SKIP");
  EXPECT_FALSE((CheckResult{"z", Verdict::Fail, ""}).passed());
  EXPECT_TRUE((CheckResult{"z", Verdict::Skip, ""}).passed());
}

TEST(CheckCorrectness, Figures) {
  for (const char* f : kFigures) {
    auto r = check_correctness(f, smc(read_corpus(f)), {});
    EXPECT_EQ(r.verdict, Verdict::Pass) << format(r);
  }
}

TEST(CheckCorrectness, WithInputs) {
  auto r = check_correctness("cmp", smc(kCompare), party_inputs("a = 4\n", "b = 9\n"));
  EXPECT_EQ(r.verdict, Verdict::Pass) << format(r);
}

TEST(CheckCorrectness, FaultIsFail) {
  auto r = check_correctness("fault", smc("private int a = 1; public int b; if (a == 1) { b = 2; } else { }"), {});
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_NE(r.detail.find("fault"), std::string::npos);
}

TEST(CheckCorrectness, MisalignedSkips) {
  // Reading past a one-int block hits a float.
  auto r = check_correctness("mis", smc("public int i = 1; private int a[1] = {5}; private float f = 2.5; "
                                        "private int x; x = a[i];"),
                             {});
  EXPECT_EQ(r.verdict, Verdict::Skip) << format(r);
}

TEST(NonInterference, DifferentSecretsPass) {
  auto r = check_noninterference(smc(kCompare), party_inputs("a = 4\n", "b = 9\n"), party_inputs("a = 12\n", "b = 1\n"));
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(NonInterference, SameInputsPass) {
  auto in = party_inputs("a = 4\n", "b = 9\n");
  EXPECT_TRUE(check_noninterference(smc(kCompare), in, in).pass);
}

TEST(NonInterference, SeedIndependentTraces) {
  auto in = party_inputs("a = 4\n", "b = 9\n");
  RunOptions o1, o2;
  o1.seed = 3;
  o2.seed = 99;
  auto x = run_smc2(smc(kCompare), in, o1);
  auto y = run_smc2(smc(kCompare), in, o2);
  EXPECT_EQ(x.parties[0].trace.d, y.parties[0].trace.d);
  EXPECT_EQ(x.parties[0].trace.l, y.parties[0].trace.l);
}

TEST(NonInterference, BackdoorLeakFails) {
  const char* src =
      "private int a; public int y = 0; smcinput(a, 1);"
      "if (declassify(a) == 1) { y = 1; } else { y = 2; }";
  auto r = check_noninterference(smc(src), party_inputs("a = 1\n", ""), party_inputs("a = 0\n", ""));
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.detail.find("D["), std::string::npos) << r.detail;
}

TEST(Confluence, CorpusRuns) {
  for (const char* f : kFigures) {
    auto s = run_smc2(smc(read_corpus(f)), {});
    auto r = check_confluence(s);
    EXPECT_TRUE(r.pass) << f << ": " << r.detail;
  }
}

TEST(Confluence, SinglePartyVacuous) {
  RunOptions o;
  o.field.q = 1;
  o.field.t = 0;
  auto s = run_smc2(smc("private int a = 1, b = 2, c; if (a < b) { c = a; } else { c = b; }"), {}, o);
  EXPECT_TRUE(check_confluence(s).pass);
}

TEST(Confluence, DesyncedPartyDetected) {
  RunOptions o;
  o.desync_party = 2;
  auto s = run_smc2(smc(read_corpus("simple_pointer.sc")), {}, o);
  auto r = check_confluence(s);
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.detail.find("party 2"), std::string::npos) << r.detail;
}

TEST(BranchOracle, Figures) {
  for (const char* f : kFigures) {
    auto r = check_branch_oracle(f, smc(read_corpus(f)), {});
    EXPECT_EQ(r.verdict, Verdict::Pass) << format(r);
    EXPECT_EQ(r.detail, "1 branches");
  }
}

TEST(BranchOracle, LocationTrackingForced) {
  RunOptions o;
  o.tracking = Tracking::Location;
  for (const char* f : {"simple_correct.sc", "resolution_cost.sc"}) {
    auto r = check_branch_oracle(f, smc(read_corpus(f)), {}, o);
    EXPECT_EQ(r.verdict, Verdict::Pass) << format(r);
  }
}

TEST(BranchOracle, NestedOnlyChecksTakenPath) {
  const char* src =
      "private int a = 1, b = 2, c = 0;"
      "if (a < b) { if (b < a) { c = 1; } else { c = 2; } } else { if (a < b) { c = 3; } else { c = 4; } }";
  auto r = check_branch_oracle("nested", smc(src), {});
  EXPECT_EQ(r.verdict, Verdict::Pass) << format(r);
  EXPECT_EQ(r.detail, "2 branches");
}

TEST(ProtocolAxioms, SmallFieldExhaustive) {
  mpc::FieldParams f;
  f.p = 11;
  auto start = std::chrono::steady_clock::now();
  auto results = check_protocol_axioms(f);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ASSERT_EQ(results.size(), 7u);
  for (const auto& r : results) EXPECT_EQ(r.verdict, Verdict::Pass) << format(r);
  EXPECT_EQ(results[2].name, "axiom.mult");
  EXPECT_EQ(results[2].detail, "121 cases");
  EXPECT_LT(secs, 5.0);
}
