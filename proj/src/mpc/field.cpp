#include "smc2/field.hpp"

#include <stdexcept>
#include <string>

namespace smc2::mpc {
namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % sp == 0) return n == sp;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all 64-bit n.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void FieldParams::validate() const {
  if (q < 1) throw std::invalid_argument("need at least one party");
  if (t < 0 || 2 * t >= q) throw std::invalid_argument("threshold must satisfy t < q/2");
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (static_cast<std::uint64_t>(q) >= p) throw std::invalid_argument("field too small for the party count");
}

std::uint64_t Field::add(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t r = a + b;  // both < p <= 2^63, no overflow
  return r >= p_ ? r - p_ : r;
}

std::uint64_t Field::sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (p_ - b); }

std::uint64_t Field::mul(std::uint64_t a, std::uint64_t b) const { return mulmod(a, b, p_); }

std::uint64_t Field::pow(std::uint64_t a, std::uint64_t e) const { return powmod(a, e, p_); }

std::uint64_t Field::inv(std::uint64_t a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero");
  return powmod(a, p_ - 2, p_);
}

std::uint64_t Field::from_signed(std::int64_t v) const {
  auto m = static_cast<std::int64_t>(p_);
  std::int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::int64_t Field::to_signed(std::uint64_t v) const {
  v %= p_;
  if (v > p_ / 2) return -static_cast<std::int64_t>(p_ - v);
  return static_cast<std::int64_t>(v);
}

std::uint64_t Field::interpolate(std::span<const std::uint64_t> xs, std::span<const std::uint64_t> ys,
                                 std::uint64_t x) const {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::uint64_t num = 1;
    std::uint64_t den = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      num = mul(num, sub(x % p_, xs[j]));
      den = mul(den, sub(xs[i], xs[j]));
    }
    acc = add(acc, mul(ys[i] % p_, mul(num, inv(den))));
  }
  return acc;
}

}  // namespace smc2::mpc
