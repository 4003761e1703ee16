#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace smc2::mpc {

inline constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;  // 2^61 - 1

struct FieldParams {
  std::uint64_t p = kDefaultPrime;
  int q = 3;  // parties
  int t = 1;  // threshold: t+1 shares reconstruct

  // Throws std::invalid_argument unless t < q/2, q >= 1 and p looks prime.
  void validate() const;
};

bool is_prime(std::uint64_t n);

// Arithmetic in Z_p.
class Field {
 public:
  explicit Field(std::uint64_t p) : p_(p) {}

  std::uint64_t p() const { return p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const;  // a != 0

  // Signed plaintexts map to the centred range (-p/2, p/2).
  std::uint64_t from_signed(std::int64_t v) const;
  std::int64_t to_signed(std::uint64_t v) const;

  // Value at x of the polynomial through the points (xs[k], ys[k]).
  std::uint64_t interpolate(std::span<const std::uint64_t> xs, std::span<const std::uint64_t> ys,
                            std::uint64_t x) const;

 private:
  std::uint64_t p_;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

// One share per party; index k holds party k+1's share.
using Shares = std::vector<std::uint64_t>;

}  // namespace smc2::mpc
