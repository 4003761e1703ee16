#include <gtest/gtest.h>

#include "smc2/error.hpp"
#include "smc2/parser.hpp"
#include "smc2/vanilla.hpp"

using namespace smc2;

namespace {

VanillaResult run(const std::string& src, int parties = 1, InputSet in = {}) {
  return run_vanilla(parse(src, {Dialect::Vanilla, false}), in, parties);
}

Value var(const VanillaParty& p, const std::string& name) {
  const Env::Binding& b = p.env.lookup(name);
  return p.mem.read_val(b.loc.block, b.type);
}

std::vector<std::string> names(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& c : t.d) out.push_back(c.name);
  return out;
}

bool has_code(const Trace& t, const std::string& n) {
  for (const auto& c : t.d)
    if (c.name == n) return true;
  return false;
}

ErrorKind kind_of(const std::string& src) {
  try {
    run(src);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << src;
  return ErrorKind::Desync;
}

}  // namespace

TEST(Vanilla, SimpleBranchPicksMinimum) {
  auto r = run("int a=3,b=7,c=0; if(a<b){c=a;} else {c=b;}");
  EXPECT_EQ(var(r.parties[0], "c").i, 3);
  EXPECT_TRUE(has_code(r.parties[0].trace, "iet"));
  EXPECT_TRUE(has_code(r.parties[0].trace, "ltt"));
  EXPECT_FALSE(has_code(r.parties[0].trace, "ief"));
}

TEST(Vanilla, PointerChallengeHandOracle) {
  auto r = run("int a=3, b=7, c=5, *p=&a; if (a<b) { *p=c; } else { p=&b; }");
  const auto& p = r.parties[0];
  EXPECT_EQ(var(p, "a").i, 5);
  EXPECT_EQ(var(p, "b").i, 7);
  Value ptr = var(p, "p");
  ASSERT_TRUE(ptr.is(Value::Kind::Ptr));
  EXPECT_EQ(ptr.ptr.locs.at(0), p.env.lookup("a").loc);
}

TEST(Vanilla, ArithmeticCodesAndTruncation) {
  auto r = run("int x = 3 * 4; int y = 7 / 2; int z = -7 / 2;");
  EXPECT_EQ(var(r.parties[0], "x").i, 12);
  EXPECT_EQ(var(r.parties[0], "y").i, 3);
  EXPECT_EQ(var(r.parties[0], "z").i, -3);
  EXPECT_TRUE(has_code(r.parties[0].trace, "bm"));
  EXPECT_TRUE(has_code(r.parties[0].trace, "bd"));
}

TEST(Vanilla, IntWrapsAround) {
  auto r = run("int x = 2147483647; x = x + 1;");
  EXPECT_EQ(var(r.parties[0], "x").i, -2147483647 - 1);
}

TEST(Vanilla, FloatConversionOnAssignment) {
  auto r = run("int x; float f = 2.75; x = f; float g = 3;");
  EXPECT_EQ(var(r.parties[0], "x").i, 2);
  EXPECT_FLOAT_EQ(var(r.parties[0], "g").f, 3.0F);
}

TEST(Vanilla, DeclarationTraceShape) {
  auto r = run("int a = 1;");
  EXPECT_EQ(names(r.parties[0].trace), (std::vector<std::string>{"dv", "w", "ds"}));
  EXPECT_EQ(r.parties[0].trace.d.back().span, 3u);
}

TEST(Vanilla, SequenceIsLeftNested) {
  auto r = run("int a; int b; int c;");
  EXPECT_EQ(names(r.parties[0].trace), (std::vector<std::string>{"dv", "dv", "ss", "dv", "ss"}));
  EXPECT_EQ(r.parties[0].trace.d.back().span, 5u);
  auto kids = children(r.parties[0].trace.d, 4);
  EXPECT_EQ(kids, (std::vector<std::size_t>{0, 3}));
}

TEST(Vanilla, WhileLoop) {
  auto r = run("int i = 0; int s = 0; while (i < 5) { s = s + i; i = i + 1; }");
  EXPECT_EQ(var(r.parties[0], "s").i, 10);
  int wlc = 0;
  for (const auto& c : r.parties[0].trace.d) wlc += c.name == "wlc";
  EXPECT_EQ(wlc, 5);
  EXPECT_EQ(r.parties[0].trace.d.back().name, "ss");
}

TEST(Vanilla, LoopBudget) {
  EXPECT_THROW(run_vanilla(parse("int i = 0; while (i < 1) {}", {Dialect::Vanilla, false}), {}, 1, 100), Error);
}

TEST(Vanilla, ArraysAndOutOfBounds) {
  auto r = run("int a[3] = {1, 2, 3}; int b = 9; int x = a[1]; a[0] = 5;");
  const auto& p = r.parties[0];
  EXPECT_EQ(var(p, "x").i, 2);
  EXPECT_TRUE(has_code(p.trace, "wae"));
  EXPECT_TRUE(has_code(p.trace, "ra"));
  EXPECT_TRUE(has_code(p.trace, "wa"));
  EXPECT_FALSE(r.misaligned);
}

TEST(Vanilla, OutOfBoundsReadSpillsIntoNextBlock) {
  // a's data block is followed by b's block; a[2] lands on b.
  auto r = run("int a[2] = {1, 2}; int b = 42; int x = a[2];");
  EXPECT_EQ(var(r.parties[0], "x").i, 42);
  EXPECT_TRUE(has_code(r.parties[0].trace, "rao"));
  EXPECT_FALSE(r.misaligned);
}

TEST(Vanilla, OutOfBoundsWriteSpillsIntoNextBlock) {
  auto r = run("int a[2]; int b = 42; a[2] = 7;");
  EXPECT_EQ(var(r.parties[0], "b").i, 7);
  EXPECT_TRUE(has_code(r.parties[0].trace, "wao"));
}

TEST(Vanilla, MalformedOutOfBoundsIsFlagged) {
  auto r = run("int a[2]; float f = 1.0; int x = a[2];");
  EXPECT_TRUE(r.misaligned);
}

TEST(Vanilla, PointerIncrementWalksElements) {
  auto r = run("int a[3] = {4, 5, 6}; int *p = a; ++p; int x = *p; ++*p;");
  const auto& p = r.parties[0];
  EXPECT_EQ(var(p, "x").i, 5);
  EXPECT_TRUE(has_code(p.trace, "pin1"));
  EXPECT_TRUE(has_code(p.trace, "pin2"));
  const auto& a = p.env.lookup("a");
  Location data = p.mem.read_ptr(a.loc.block, a.type).locs[0];
  EXPECT_EQ(p.mem.read_arr(data.block, 1, Type::scalar(Label::Public, BaseType::Int)).i, 6);
}

TEST(Vanilla, MallocFree) {
  auto r = run("int *p = malloc(sizeof(int)); *p = 3; int x = *p; free(p);");
  EXPECT_EQ(var(r.parties[0], "x").i, 3);
  EXPECT_TRUE(has_code(r.parties[0].trace, "mal"));
  EXPECT_TRUE(has_code(r.parties[0].trace, "fre"));
  EXPECT_EQ(kind_of("int *p = malloc(4); free(p); free(p);"), ErrorKind::DoubleFree);
  EXPECT_EQ(kind_of("int a; int *p = &a; free(p);"), ErrorKind::NotFreeable);
  EXPECT_EQ(kind_of("int *p = malloc(4); free(p); int x = *p;"), ErrorKind::UseAfterFree);
}

TEST(Vanilla, FunctionsAndRecursionBudget) {
  auto r = run("int g; void f(int n) { g = g + n; } f(2); f(3);");
  EXPECT_EQ(var(r.parties[0], "g").i, 5);
  EXPECT_TRUE(has_code(r.parties[0].trace, "fd"));
  EXPECT_TRUE(has_code(r.parties[0].trace, "fc"));
  auto proto = run("int g; void f(int n); void f(int n) { g = n; } f(4);");
  EXPECT_EQ(var(proto.parties[0], "g").i, 4);
  EXPECT_EQ(kind_of("void f(int n); f(1);"), ErrorKind::UnboundVariable);
  EXPECT_EQ(kind_of("void f(int n) { f(n); } f(1);"), ErrorKind::LoopBudgetExceeded);
}

TEST(Vanilla, DivisionByZero) { EXPECT_EQ(kind_of("int x = 0; int y = 1 / x;"), ErrorKind::DivisionByZero); }

TEST(Vanilla, InputOutputPerParty) {
  InputSet in;
  in.add_party(1, "a = 4\n");
  in.add_party(2, "b = 9\n");
  auto r = run("int a; int b; mcinput(a, 1); mcinput(b, 2); int c = a + b; mcoutput(c, 2);", 2, in);
  ASSERT_EQ(r.parties.size(), 2u);
  EXPECT_TRUE(r.parties[0].outputs.empty());
  ASSERT_EQ(r.parties[1].outputs.size(), 1u);
  EXPECT_EQ(r.parties[1].outputs[0], (OutputLine{"c", "13"}));
  EXPECT_EQ(r.parties[0].trace, r.parties[1].trace);
}

TEST(Vanilla, ArrayInputOutput) {
  InputSet in;
  in.add_party(1, "a = [1, 2, 3]\n");
  auto r = run("int a[3]; mcinput(a, 1, 3); a[0] = a[0] + a[2]; mcoutput(a, 1, 3);", 1, in);
  ASSERT_EQ(r.parties[0].outputs.size(), 1u);
  EXPECT_EQ(r.parties[0].outputs[0].value, "[4, 2, 3]");
}

TEST(Vanilla, PartyIndexChecked) {
  EXPECT_EQ(kind_of("int a; mcoutput(a, 2);"), ErrorKind::IndexOutOfParties);
}

TEST(Vanilla, Deterministic) {
  std::string src = "int a[2] = {1, 2}; int *p = a; ++p; *p = 5; int b = a[1] * 3;";
  auto r1 = run(src);
  auto r2 = run(src);
  EXPECT_EQ(r1.parties[0].trace, r2.parties[0].trace);
  EXPECT_EQ(r1.parties[0].mem.dump(), r2.parties[0].mem.dump());
}
