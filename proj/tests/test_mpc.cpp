#include <gtest/gtest.h>

#include "smc2/error.hpp"
#include "smc2/protocols.hpp"

using namespace smc2;
using namespace smc2::mpc;

namespace {

FieldParams small(std::uint64_t p) { return FieldParams{p, 3, 1}; }

// Independent Lagrange oracle over Z_p using plain 64-bit arithmetic (p small).
std::int64_t lagrange_zero(std::uint64_t p, const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
  const auto m = static_cast<std::int64_t>(p);
  auto md = [m](std::int64_t v) { return ((v % m) + m) % m; };
  auto inv = [&](std::int64_t a) {
    for (std::int64_t x = 1; x < static_cast<std::int64_t>(p); ++x)
      if (md(a * x) == 1) return x;
    return std::int64_t{0};
  };
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::int64_t num = 1, den = 1;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      num = md(num * -pts[j].first);
      den = md(den * (pts[i].first - pts[j].first));
    }
    acc = md(acc + pts[i].second * md(num * inv(den)));
  }
  return acc;
}

ErrorKind error_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Desync;
}

}  // namespace

TEST(Field, Params) {
  EXPECT_NO_THROW(FieldParams{}.validate());
  EXPECT_THROW((FieldParams{101, 3, 2}.validate()), std::invalid_argument);
  EXPECT_THROW((FieldParams{100, 3, 1}.validate()), std::invalid_argument);
  EXPECT_TRUE(is_prime(kDefaultPrime));
}

TEST(Field, SignedCentering) {
  Field f(101);
  EXPECT_EQ(f.from_signed(-1), 100u);
  EXPECT_EQ(f.to_signed(100), -1);
  EXPECT_EQ(f.to_signed(50), 50);
  EXPECT_EQ(f.to_signed(51), -50);
}

TEST(Share, ExplicitCoefficient) {
  Engine e(small(101), 1);
  std::vector<std::uint64_t> c{7};
  Shares s = e.share_with(5, c);
  EXPECT_EQ(s, (Shares{12, 19, 26}));
  EXPECT_EQ(e.reconstruct(s), 5);
  std::vector<std::pair<std::int64_t, std::int64_t>> pts{{1, 12}, {2, 19}};
  EXPECT_EQ(lagrange_zero(101, pts), 5);
  std::vector<std::pair<std::int64_t, std::int64_t>> tail{{2, 19}, {3, 26}};
  EXPECT_EQ(lagrange_zero(101, tail), 5);
}

TEST(Share, ZeroWithZeroCoefficient) {
  Engine e(small(101), 1);
  std::vector<std::uint64_t> c{0};
  EXPECT_EQ(e.share_with(0, c), (Shares{0, 0, 0}));
}

TEST(Share, TooFewShares) {
  Engine e(small(101), 1);
  Shares one{12};
  EXPECT_EQ(error_of([&] { e.reconstruct(one); }), ErrorKind::NotEnoughShares);
}

TEST(Share, ConsistencyCheck) {
  Engine e(small(101), 1);
  Shares s = e.share(9);
  EXPECT_TRUE(e.consistent(s));
  s[2] = (s[2] + 1) % 101;
  EXPECT_FALSE(e.consistent(s));
}

TEST(Share, RandomRoundTripDefaultField) {
  Engine e(FieldParams{}, 42);
  for (std::int64_t x : {0LL, 1LL, -1LL, 123456789LL, -987654321LL}) EXPECT_EQ(e.reconstruct(e.share(x)), x);
}

TEST(Mult, ShamirAndDealer) {
  for (Backend b : {Backend::Shamir, Backend::Dealer}) {
    Engine e(small(101), 3, b);
    EXPECT_EQ(e.reconstruct(e.mult(e.share(3), e.share(4))), 12);
    EXPECT_EQ(e.reconstruct(e.mult(e.share(17), e.share(0))), 0);
    EXPECT_EQ(e.reconstruct(e.mult(e.share(17), e.share(1))), 17);
    EXPECT_EQ(e.report().mult, 3u);
    EXPECT_EQ(e.report().rounds, 3u);
  }
}

TEST(Mult, OutputIsDegreeT) {
  Engine e(FieldParams{kDefaultPrime, 5, 2}, 8);
  Shares r = e.mult(e.share(-6), e.share(7));
  EXPECT_TRUE(e.consistent(r));
  EXPECT_EQ(e.reconstruct(r), -42);
}

TEST(Binop, LocalOpsTakeNoRounds) {
  Engine e(small(101), 3);
  EXPECT_EQ(e.reconstruct(e.binop(BinOp::Add, {e.share(3)}, {e.share(4)}).shares), 7);
  Shares x = e.share(9);
  EXPECT_EQ(e.reconstruct(e.binop(BinOp::Sub, {x}, {x}).shares), 0);
  EXPECT_EQ(e.report().rounds, 0u);
  EXPECT_EQ(e.reconstruct(e.binop(BinOp::Div, {e.share(7)}, {e.share(2)}).shares), 3);
  EXPECT_EQ(e.reconstruct(e.binop(BinOp::Div, {e.share(-7)}, {e.share(2)}).shares), -3);
  EXPECT_EQ(error_of([&] { e.binop(BinOp::Div, {e.share(7)}, {e.share(0)}); }), ErrorKind::DivisionByZero);
}

TEST(Binop, Comparisons) {
  Engine e(FieldParams{}, 3);
  auto c = [&](BinOp op, std::int64_t a, std::int64_t b) {
    return e.reconstruct(e.cmp(op, e.share(a), e.share(b)));
  };
  EXPECT_EQ(c(BinOp::Lt, 3, 7), 1);
  EXPECT_EQ(c(BinOp::Lt, 7, 3), 0);
  EXPECT_EQ(c(BinOp::Lt, -2, 1), 1);
  EXPECT_EQ(c(BinOp::Eq, 5, 5), 1);
  EXPECT_EQ(c(BinOp::Ne, 5, 5), 0);
  EXPECT_EQ(e.report().cmp, 5u);
}

TEST(Binop, Floats) {
  Engine e(FieldParams{}, 3);
  Typed a{e.share(Engine::float_to_bits(1.5F)), BaseType::Float};
  Typed b{e.share(2), BaseType::Int};
  Typed r = e.binop(BinOp::Mul, a, b);
  EXPECT_EQ(r.base, BaseType::Float);
  EXPECT_EQ(Engine::bits_to_float(e.reconstruct(r.shares)), 3.0F);
  Typed lt = e.binop(BinOp::Lt, b, a);
  EXPECT_EQ(lt.base, BaseType::Int);
  EXPECT_EQ(e.reconstruct(lt.shares), 0);
}

TEST(Mux, ArrayReadWrite) {
  Engine e(small(101), 4);
  std::vector<Shares> arr{e.share(10), e.share(20), e.share(30)};
  EXPECT_EQ(e.reconstruct(e.ar(e.share(1), arr)), 20);
  EXPECT_EQ(e.reconstruct(e.ar(e.share(5), arr)), 0);
  std::vector<Shares> one{e.share(8)};
  EXPECT_EQ(e.reconstruct(e.ar(e.share(0), one)), 8);

  std::vector<Shares> w{e.share(1), e.share(2), e.share(3)};
  auto out = e.aw(e.share(1), w, e.share(9));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(e.reconstruct(out[0]), 1);
  EXPECT_EQ(e.reconstruct(out[1]), 9);
  EXPECT_EQ(e.reconstruct(out[2]), 3);
  auto same = e.aw(e.share(7), w, e.share(9));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(e.reconstruct(same[k]), e.reconstruct(w[k]));
}

TEST(Mux, Dereference) {
  Engine e(small(101), 4);
  std::vector<Shares> v{e.share(5), e.share(7)};
  std::vector<Shares> t0{e.share(1), e.share(0)};
  std::vector<Shares> t1{e.share(0), e.share(1)};
  EXPECT_EQ(e.reconstruct(e.dv(v, t0)), 5);
  EXPECT_EQ(e.reconstruct(e.dv(v, t1)), 7);
  std::vector<Shares> single{e.share(4)};
  std::vector<Shares> tag{e.constant(1)};
  EXPECT_EQ(e.reconstruct(e.dv(single, tag)), 4);
}

TEST(Free, RelocatesIntoTrueLocation) {
  Engine e(small(101), 4);
  // Plaintext oracle: true location m > 0 receives location 0's contents and
  // location 0 receives m's; the tags drop location 0.
  for (int truth = 0; truth < 3; ++truth) {
    std::vector<std::vector<Shares>> contents{{e.share(11), e.share(12)}, {e.share(21), e.share(22)},
                                              {e.share(31), e.share(32)}};
    std::vector<Shares> tags;
    for (int m = 0; m < 3; ++m) tags.push_back(e.share(m == truth ? 1 : 0));
    FreeResult r = e.free(contents, tags);
    std::vector<std::vector<int>> expect{{11, 12}, {21, 22}, {31, 32}};
    if (truth > 0) std::swap(expect[0], expect[static_cast<std::size_t>(truth)]);
    for (int m = 0; m < 3; ++m)
      for (int s = 0; s < 2; ++s) EXPECT_EQ(e.reconstruct(r.contents[m][s]), expect[m][s]) << truth;
    ASSERT_EQ(r.tags.size(), 2u);
    int true_after = truth == 0 ? 1 : truth;
    for (int m = 1; m < 3; ++m) EXPECT_EQ(e.reconstruct(r.tags[m - 1]), m == true_after ? 1 : 0);
  }
}

TEST(Free, IdenticalContentsUnchanged) {
  Engine e(small(101), 4);
  std::vector<std::vector<Shares>> contents{{e.share(5)}, {e.share(5)}};
  for (int truth = 0; truth < 2; ++truth) {
    std::vector<Shares> tags{e.share(truth == 0), e.share(truth == 1)};
    FreeResult r = e.free(contents, tags);
    EXPECT_EQ(e.reconstruct(r.contents[0][0]), 5);
    EXPECT_EQ(e.reconstruct(r.contents[1][0]), 5);
  }
}

TEST(Resolve, Scalar) {
  Engine e(small(101), 4);
  EXPECT_EQ(e.reconstruct(e.resolve(e.share(1), e.share(3), e.share(7))), 3);
  EXPECT_EQ(e.reconstruct(e.resolve(e.share(0), e.share(3), e.share(7))), 7);
  EXPECT_EQ(e.reconstruct(e.resolve(e.share(0), e.share(4), e.share(4))), 4);
  EXPECT_EQ(e.report().resolve, 3u);
}

TEST(Axioms, ExhaustiveSmallField) {
  const std::uint64_t p = 11;
  Engine e(small(p), 9);
  Field f(p);
  for (BinOp op : {BinOp::Add, BinOp::Sub, BinOp::Mul}) {
    int ok = 0;
    for (std::int64_t a = 0; a < 11; ++a) {
      for (std::int64_t b = 0; b < 11; ++b) {
        Typed r = e.binop(op, {e.share(a)}, {e.share(b)});
        std::int64_t plain = op == BinOp::Add ? a + b : op == BinOp::Sub ? a - b : a * b;
        ok += e.reconstruct_raw(r.shares) == f.from_signed(plain);
      }
    }
    EXPECT_EQ(ok, 121) << to_string(op);
  }
}

TEST(Determinism, SameSeedSameShares) {
  Engine a(FieldParams{}, 77);
  Engine b(FieldParams{}, 77);
  Shares xa = a.ar(a.share(1), std::vector<Shares>{a.share(4), a.share(5)});
  Shares xb = b.ar(b.share(1), std::vector<Shares>{b.share(4), b.share(5)});
  EXPECT_EQ(xa, xb);
}

TEST(Obliviousness, RoundsIndependentOfPlaintext) {
  RoundReport first;
  for (int idx = 0; idx < 4; ++idx) {
    Engine e(small(101), 1);
    std::vector<Shares> arr{e.share(idx), e.share(2 * idx), e.share(3)};
    e.ar(e.share(idx), arr);
    e.aw(e.share(3 - idx), arr, e.share(idx));
    e.resolve(e.share(idx % 2), arr[0], arr[1]);
    if (idx == 0) first = e.report();
    EXPECT_EQ(e.report(), first);
  }
}
