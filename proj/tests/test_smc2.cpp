#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "smc2/error.hpp"
#include "smc2/parser.hpp"
#include "smc2/smc2.hpp"
#include "test_util.hpp"

using namespace smc2;

namespace {

Program parse_smc(const std::string& src) { return parse(src, {Dialect::Smc2, true}); }

Smc2State run(const std::string& src, RunOptions opt = {}, InputSet in = {}) {
  return run_smc2(parse_smc(src), in, opt);
}

Type type_of_var(const Smc2State& s, const std::string& name) { return s.parties[0].env.lookup(name).type; }

bool has_code(const Trace& t, const std::string& n) {
  for (const auto& c : t.d)
    if (c.name == n) return true;
  return false;
}

ErrorKind kind_of(const std::string& src, RunOptions opt = {}, InputSet in = {}) {
  try {
    run(src, opt, in);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << src;
  return ErrorKind::Desync;
}

RunOptions tracking(Tracking t) {
  RunOptions o;
  o.tracking = t;
  return o;
}

RunOptions legacy() {
  RunOptions o;
  o.legacy = true;
  return o;
}

}  // namespace

TEST(Smc2, SimpleCorrectResolvesMinimum) {
  for (auto opt : {RunOptions{}, legacy(), tracking(Tracking::Location)}) {
    auto s = run(read_corpus("simple_correct.sc"), opt);
    EXPECT_EQ(value(s, "c"), 3);
    EXPECT_EQ(value(s, "a"), 3);
    EXPECT_EQ(value(s, "b"), 7);
    ASSERT_EQ(s.taken.size(), 1u);
    EXPECT_TRUE(s.taken[0]);
  }
}

TEST(Smc2, SimplePointerKeepsBothTargets) {
  auto s = run(read_corpus("simple_pointer.sc"));
  auto p = column(s, "p");
  const auto& p0 = s.parties[0];
  ASSERT_EQ(p[0].ptr.alpha(), 2u);
  EXPECT_EQ(p[0].ptr.locs[0], p0.env.lookup("a").loc);
  EXPECT_EQ(p[0].ptr.locs[1], p0.env.lookup("b").loc);
  for (std::size_t m = 0; m < 2; ++m) {
    std::vector<Value> tag;
    for (const auto& v : p) tag.push_back(Value::of_share(v.ptr.tags[m], BaseType::Int));
    EXPECT_EQ(reconstruct_value(s, tag), m == 0 ? 1 : 0);
  }
  Value truth = plaintext(s, p, type_of_var(s, "p"));
  EXPECT_EQ(truth.ptr.locs[0], p0.env.lookup("a").loc);
}

TEST(Smc2, PointerChallengeUsesLocationTracking) {
  auto s = run(read_corpus("pointer_challenge.sc"));
  EXPECT_EQ(value(s, "a"), 5);
  EXPECT_EQ(value(s, "b"), 7);
  EXPECT_EQ(value(s, "c"), 5);
  Value truth = plaintext(s, column(s, "p"), type_of_var(s, "p"));
  EXPECT_EQ(truth.ptr.locs[0], s.parties[0].env.lookup("a").loc);
  EXPECT_TRUE(has_code(s.parties[0].trace, "iepd"));
  EXPECT_FALSE(has_code(s.parties[0].trace, "iep"));
}

TEST(Smc2, PointerChallengeRejectsForcedVariableTracking) {
  EXPECT_EQ(kind_of(read_corpus("pointer_challenge.sc"), tracking(Tracking::Variable)), ErrorKind::UnsupportedConstruct);
}

TEST(Smc2, PointerChallengeLegacyAgrees) {
  auto s = run(read_corpus("pointer_challenge.sc"), legacy());
  EXPECT_EQ(value(s, "a"), 5);
  EXPECT_EQ(value(s, "b"), 7);
}

TEST(Smc2, ArrayChallengeRestoresOutOfBoundsVictim) {
  for (auto opt : {RunOptions{}, legacy()}) {
    auto s = run(read_corpus("array_challenge.sc"), opt);
    EXPECT_EQ(array(s, "a"), (std::vector<std::int64_t>{0, 3}));
    EXPECT_EQ(value(s, "b"), 7);
    EXPECT_EQ(value(s, "c"), 3);
    EXPECT_EQ(value(s, "d"), 4);
  }
}

TEST(Smc2, ResolutionCostPerBranchVersusPerStatement) {
  auto once = run(read_corpus("resolution_cost.sc"));
  auto each = run(read_corpus("resolution_cost.sc"), legacy());
  EXPECT_EQ(once.rounds.resolve, 2u);
  EXPECT_EQ(each.rounds.resolve, 8u);
  EXPECT_EQ(value(once, "a"), value(each, "a"));
  EXPECT_EQ(value(once, "c"), value(each, "c"));
  // Then branch: c = 1*2 = 2, a = 2 + 3 = 5.
  EXPECT_EQ(value(once, "c"), 2);
  EXPECT_EQ(value(once, "a"), 5);
}

TEST(Smc2, ElseBranchTaken) {
  auto s = run("private int a=9,b=7,c=0; if(a<b){c=a;} else {c=b;}");
  EXPECT_EQ(value(s, "c"), 7);
  EXPECT_FALSE(s.taken[0]);
}

TEST(Smc2, NestedPrivateIfs) {
  const char* src =
      "private int a=3,b=7,c=1,r=0;"
      "if (a<b) { if (c==1) { r = 10; } else { r = 20; } } else { if (c==1) { r = 30; } else { r = 40; } }";
  for (auto opt : {RunOptions{}, legacy(), tracking(Tracking::Location)}) {
    auto s = run(src, opt);
    EXPECT_EQ(value(s, "r"), 10);
    EXPECT_EQ(s.taken.size(), 3u);
  }
}

TEST(Smc2, NonComparisonGuardCostsOneComparison) {
  auto s = run("private int a=2,r=0; if (a) { r = 1; } else { r = 2; }");
  EXPECT_EQ(value(s, "r"), 1);
  EXPECT_EQ(s.rounds.cmp, 1u);
}

TEST(Smc2, PrivateArrayIndex) {
  auto s = run("private int a[3]={5,6,7}, i=2, x=0; x = a[i]; a[i] = 9;");
  EXPECT_EQ(value(s, "x"), 7);
  EXPECT_EQ(array(s, "a"), (std::vector<std::int64_t>{5, 6, 9}));
  EXPECT_TRUE(has_code(s.parties[0].trace, "mpra"));
  EXPECT_TRUE(has_code(s.parties[0].trace, "mpwa"));
}

TEST(Smc2, PrivateIndexWriteInBranch) {
  auto s = run("private int a[3]={5,6,7}, i=1, c=1; if (c==1) { a[i] = 0; } else { a[i] = 4; }");
  EXPECT_EQ(array(s, "a"), (std::vector<std::int64_t>{5, 0, 7}));
}

TEST(Smc2, MultiLocationDereference) {
  const char* src =
      "private int a=3,b=7,x=0,*p; if (a<b) { p=&a; } else { p=&b; } x = *p; *p = 11;";
  auto s = run(src);
  EXPECT_EQ(value(s, "x"), 3);
  EXPECT_EQ(value(s, "a"), 11);
  EXPECT_EQ(value(s, "b"), 7);
  EXPECT_TRUE(has_code(s.parties[0].trace, "mprdp"));
}

TEST(Smc2, PointerToPointerCombinesTags) {
  const char* src =
      "private int a=1,b=2,x=0,*p,*q,**pp;"
      "if (a<b) { p=&a; } else { p=&b; }"
      "q=&b; if (x==0) { pp=&p; } else { pp=&q; } x = **pp;";
  auto s = run(src);
  EXPECT_EQ(value(s, "x"), 1);
}

TEST(Smc2, PrivateFloatArithmetic) {
  auto s = run("private float f=1.5; private int i=2; f = f * i;");
  Value v = plaintext(s, column(s, "f"), type_of_var(s, "f"));
  EXPECT_FLOAT_EQ(v.f, 3.0F);
}

TEST(Smc2, PrivateDivisionTruncates) {
  auto s = run("private int a=-7,b=2,c=0; c = a / b;");
  EXPECT_EQ(value(s, "c"), -3);
}

TEST(Smc2, PublicWriteInPrivateBranchFaults) {
  EXPECT_EQ(kind_of("private int a=1; public int x=0; if (a==1) { x = 2; } else { }"), ErrorKind::ObliviousFault);
}

TEST(Smc2, RestrictedOperationsFaultInPrivateBranch) {
  const char* cases[] = {
      "private int a=1; public int *p; if (a==1) { p = malloc(4); } else { }",
      "private int a=1; private int *p; if (a==1) { p = pmalloc(1, private int); } else { }",
      "private int a=1; private int *p = pmalloc(1, private int); if (a==1) { pfree(p); } else { }",
      "private int a=1; public int *p = malloc(4); if (a==1) { free(p); } else { }",
      "private int a=1, x; if (a==1) { smcinput(x, 1); } else { }",
      "private int a=1; if (a==1) { smcoutput(a, 1); } else { }",
      "private int a=1; public int k; void f() { k = 1; } if (a==1) { f(); } else { }",
      "private int a=1; if (a==1) { public int y = 3; } else { }",
  };
  for (const char* src : cases) EXPECT_EQ(kind_of(src), ErrorKind::ObliviousFault) << src;
}

TEST(Smc2, PrivateLoopGuardRejected) {
  EXPECT_EQ(kind_of("private int a=1; while (a<3) { a = a + 1; }"), ErrorKind::PrivateLoopGuard);
}

TEST(Smc2, PublicPointerIntoPrivateRejected) {
  EXPECT_EQ(kind_of("private int *p; p = malloc(16);"), ErrorKind::TypeError);
}

TEST(Smc2, LabelChangingCastRejected) {
  EXPECT_EQ(kind_of("public int a=1; private int b; b = (private int) a;"), ErrorKind::TypeError);
}

TEST(Smc2, PublicLoopsAndFunctions) {
  const char* src =
      "private int acc=0; public int i=0;"
      "void add(private int v) { acc = acc + v; }"
      "while (i < 4) { add(i); i = i + 1; }";
  auto s = run(src);
  EXPECT_EQ(value(s, "acc"), 6);
}

TEST(Smc2, PureFunctionCallInPrivateBranch) {
  const char* src =
      "private int a=1, r=0;"
      "void set(private int v) { r = v; }"
      "if (a==1) { set(5); } else { set(6); }";
  auto s = run(src);
  EXPECT_EQ(value(s, "r"), 5);
}

TEST(Smc2, PfreeSingleLocation) {
  auto s = run("private int *p = pmalloc(2, private int); *p = 4; pfree(p);");
  EXPECT_TRUE(s.psi.empty());
  EXPECT_TRUE(has_code(s.parties[0].trace, "pfre"));
}

TEST(Smc2, PfreeMultiLocationRelocates) {
  const char* src =
      "private int c=0, x=0;"
      "private int *p = pmalloc(1, private int), *q = pmalloc(1, private int), *r;"
      "*p = 10; *q = 20;"
      "if (c==1) { r = p; } else { r = q; }"
      "pfree(r); x = *p;";
  auto s = run(src);
  ASSERT_EQ(s.psi.size(), 1u);
  EXPECT_EQ(value(s, "x"), 10);
  EXPECT_TRUE(has_code(s.parties[0].trace, "mpfre"));
  EXPECT_EQ(column(s, "r")[0].ptr.alpha(), 1u);
}

TEST(Smc2, PfreeSkipsNullCandidate) {
  // Per-statement resolution leaves r's initial NULL among its candidates.
  const char* src =
      "private int c=1, x=0;"
      "private int *p = pmalloc(1, private int), *q = pmalloc(1, private int), *r;"
      "*p = 10; *q = 20;"
      "if (c==1) { r = p; } else { r = q; }"
      "pfree(r); x = *q;";
  RunOptions o;
  o.legacy = true;
  auto s = run(src, o);
  ASSERT_EQ(s.psi.size(), 1u);
  EXPECT_EQ(value(s, "x"), 20);
  auto r = column(s, "r")[0].ptr;
  EXPECT_NE(std::find(r.locs.begin(), r.locs.end(), Location{0, 0}), r.locs.end());
}

TEST(Smc2, PrivateInputOutput) {
  InputSet in;
  in.add_party(1, "a = 4\n");
  in.add_party(2, "b = 9\n");
  auto s = run("private int a, b, m; smcinput(a, 1); smcinput(b, 2); if (a<b) { m = b; } else { m = a; } smcoutput(m, 1);",
               {}, in);
  ASSERT_EQ(s.parties[0].outputs.size(), 1u);
  EXPECT_EQ(s.parties[0].outputs[0].value, "9");
  EXPECT_TRUE(s.parties[1].outputs.empty());
}

TEST(Smc2, DeterministicUnderSeed) {
  auto a = run(read_corpus("pointer_challenge.sc"));
  auto b = run(read_corpus("pointer_challenge.sc"));
  EXPECT_EQ(column(a, "a"), column(b, "a"));
  RunOptions other;
  other.seed = 99;
  auto c = run(read_corpus("pointer_challenge.sc"), other);
  EXPECT_NE(column(a, "a"), column(c, "a"));
  EXPECT_EQ(value(a, "a"), value(c, "a"));
}

TEST(Smc2, TracesAgreeAcrossParties) {
  auto s = run(read_corpus("array_challenge.sc"));
  for (const auto& p : s.parties) EXPECT_EQ(p.trace.d.size(), s.parties[0].trace.d.size());
}

TEST(Smc2, BranchHookSeesGuard) {
  std::vector<BranchEvent::Phase> phases;
  RunOptions o;
  o.hook = [&](const BranchEvent& ev) {
    phases.push_back(ev.phase);
    EXPECT_TRUE(ev.taken);
    EXPECT_TRUE(ev.on_taken_path);
  };
  run(read_corpus("simple_correct.sc"), o);
  EXPECT_EQ(phases, (std::vector<BranchEvent::Phase>{BranchEvent::Phase::Before, BranchEvent::Phase::After}));
}

TEST(Smc2, DeclassifyRevealsValue) {
  auto s = run("private int a=3,b=7; public int c; c = declassify(a<b);");
  EXPECT_EQ(column(s, "c")[0].i, 1);
}
