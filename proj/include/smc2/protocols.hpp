#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smc2/ast.hpp"
#include "smc2/field.hpp"

namespace smc2::mpc {

// Protocol invocation counts. Local operations (+, -) are not counted.
struct RoundReport {
  std::uint64_t mult = 0;
  std::uint64_t cmp = 0;
  std::uint64_t div = 0;
  std::uint64_t ar = 0;
  std::uint64_t aw = 0;
  std::uint64_t dv = 0;
  std::uint64_t free = 0;
  std::uint64_t resolve = 0;
  std::uint64_t rounds = 0;

  friend bool operator==(const RoundReport&, const RoundReport&) = default;
};

std::string to_string(const RoundReport& r);

// Multiplication backend. Shamir runs the degree-reduction protocol; Dealer
// reconstructs, multiplies in the clear and reshares.
enum class Backend { Shamir, Dealer };

// Private plaintext of a share: int, or the IEEE-754 bit pattern of a float.
struct Typed {
  Shares shares;
  BaseType base = BaseType::Int;
};

struct FreeResult {
  std::vector<std::vector<Shares>> contents;  // updated slots of every location, location 0 first
  std::vector<Shares> tags;                   // one-hot over locations 1..alpha-1
};

class Engine {
 public:
  Engine(FieldParams params, std::uint64_t seed, Backend backend = Backend::Shamir);

  const FieldParams& params() const { return params_; }
  const Field& field() const { return field_; }
  int parties() const { return params_.q; }

  // Fresh degree-t sharing with random coefficients.
  Shares share(std::int64_t x);
  // Sharing with the given coefficients c1..ct (for tests).
  Shares share_with(std::int64_t x, std::span<const std::uint64_t> coeffs) const;
  // Degree-0 sharing of a public constant: every party holds x.
  Shares constant(std::int64_t x) const;

  // Uses the first t+1 shares. Throws NotEnoughShares.
  std::int64_t reconstruct(std::span<const std::uint64_t> shares) const;
  std::uint64_t reconstruct_raw(std::span<const std::uint64_t> shares) const;
  // True iff all shares lie on one polynomial of degree <= t.
  bool consistent(std::span<const std::uint64_t> shares) const;

  Shares add(const Shares& a, const Shares& b) const;
  Shares sub(const Shares& a, const Shares& b) const;
  Shares mult(const Shares& a, const Shares& b);
  Shares div(const Shares& a, const Shares& b);
  Shares cmp(BinOp op, const Shares& a, const Shares& b);
  // Dispatch over all binary operators; float operands go through the dealer.
  Typed binop(BinOp op, const Typed& a, const Typed& b);
  // Converts the plaintext between int and float representations.
  Typed convert(const Typed& v, BaseType to);

  Shares ar(const Shares& index, std::span<const Shares> elems);
  std::vector<Shares> aw(const Shares& index, std::span<const Shares> elems, const Shares& value);
  Shares dv(std::span<const Shares> values, std::span<const Shares> tags);
  // Oblivious relocation of location 0's slots into the true location.
  // contents[m] are the element slots of location m; tags are one-hot over m.
  FreeResult free(std::span<const std::vector<Shares>> contents, std::span<const Shares> tags);
  // res * a + (1 - res) * b.
  Shares resolve(const Shares& res, const Shares& a, const Shares& b);
  // Elementwise resolve of two equally long lists in one invocation.
  std::vector<Shares> resolve_all(const Shares& res, std::span<const Shares> a, std::span<const Shares> b);

  const RoundReport& report() const { return report_; }
  void reset_report() { report_ = {}; }

  // Plaintext helpers used by the god's-eye checkers.
  static float bits_to_float(std::int64_t bits);
  static std::int64_t float_to_bits(float f);

 private:
  std::uint64_t random_element() { return rng_.below(params_.p); }
  Shares mult_raw(const Shares& a, const Shares& b);
  Shares mult_dealer(const Shares& a, const Shares& b);
  Shares eq_raw(const Shares& a, std::int64_t m);

  FieldParams params_;
  Field field_;
  Rng rng_;
  Backend backend_;
  RoundReport report_;
};

}  // namespace smc2::mpc
