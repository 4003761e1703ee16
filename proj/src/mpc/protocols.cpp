#include "smc2/protocols.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "smc2/error.hpp"

namespace smc2::mpc {

std::string to_string(const RoundReport& r) {
  std::ostringstream os;
  os << "mult=" << r.mult << " cmp=" << r.cmp << " div=" << r.div << " ar=" << r.ar << " aw=" << r.aw
     << " dv=" << r.dv << " free=" << r.free << " resolve=" << r.resolve << " rounds=" << r.rounds;
  return os.str();
}

Engine::Engine(FieldParams params, std::uint64_t seed, Backend backend)
    : params_(params), field_(params.p), rng_(seed), backend_(backend) {
  params_.validate();
}

Shares Engine::share_with(std::int64_t x, std::span<const std::uint64_t> coeffs) const {
  Shares out(static_cast<std::size_t>(params_.q));
  std::uint64_t secret = field_.from_signed(x);
  for (int party = 1; party <= params_.q; ++party) {
    // Horner evaluation of secret + c1*X + ... + ct*X^t at X = party.
    std::uint64_t acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;)
      acc = field_.add(field_.mul(acc, static_cast<std::uint64_t>(party)), coeffs[k] % field_.p());
    acc = field_.add(field_.mul(acc, static_cast<std::uint64_t>(party)), secret);
    out[static_cast<std::size_t>(party - 1)] = acc;
  }
  return out;
}

Shares Engine::share(std::int64_t x) {
  std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(params_.t));
  for (auto& c : coeffs) c = random_element();
  return share_with(x, coeffs);
}

Shares Engine::constant(std::int64_t x) const {
  return Shares(static_cast<std::size_t>(params_.q), field_.from_signed(x));
}

std::uint64_t Engine::reconstruct_raw(std::span<const std::uint64_t> shares) const {
  auto need = static_cast<std::size_t>(params_.t + 1);
  if (shares.size() < need)
    fail(ErrorKind::NotEnoughShares,
         "have " + std::to_string(shares.size()) + " shares, need " + std::to_string(need));
  std::vector<std::uint64_t> xs(need);
  std::iota(xs.begin(), xs.end(), 1);
  return field_.interpolate(xs, shares.first(need), 0);
}

std::int64_t Engine::reconstruct(std::span<const std::uint64_t> shares) const {
  return field_.to_signed(reconstruct_raw(shares));
}

bool Engine::consistent(std::span<const std::uint64_t> shares) const {
  auto need = static_cast<std::size_t>(params_.t + 1);
  if (shares.size() < need) return false;
  std::vector<std::uint64_t> xs(need);
  std::iota(xs.begin(), xs.end(), 1);
  for (std::size_t k = need; k < shares.size(); ++k)
    if (field_.interpolate(xs, shares.first(need), k + 1) != shares[k] % field_.p()) return false;
  return true;
}

Shares Engine::add(const Shares& a, const Shares& b) const {
  Shares out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = field_.add(a[k], b[k]);
  return out;
}

Shares Engine::sub(const Shares& a, const Shares& b) const {
  Shares out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = field_.sub(a[k], b[k]);
  return out;
}

Shares Engine::mult_dealer(const Shares& a, const Shares& b) {
  return share(field_.to_signed(field_.mul(reconstruct_raw(a), reconstruct_raw(b))));
}

Shares Engine::mult_raw(const Shares& a, const Shares& b) {
  if (backend_ == Backend::Dealer) return mult_dealer(a, b);
  // Each party multiplies locally (degree 2t), reshares its product with a
  // fresh degree-t polynomial, and recombines with the Lagrange weights of
  // the first 2t+1 points.
  auto n = static_cast<std::size_t>(2 * params_.t + 1);
  std::vector<std::uint64_t> xs(n);
  std::iota(xs.begin(), xs.end(), 1);
  Shares out(a.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t num = 1;
    std::uint64_t den = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      num = field_.mul(num, field_.neg(xs[j]));
      den = field_.mul(den, field_.sub(xs[i], xs[j]));
    }
    std::uint64_t lambda = field_.mul(num, field_.inv(den));
    std::uint64_t d = field_.mul(a[i], b[i]);
    std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(params_.t));
    for (auto& c : coeffs) c = random_element();
    Shares h = share_with(field_.to_signed(d), coeffs);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = field_.add(out[r], field_.mul(lambda, h[r]));
  }
  return out;
}

Shares Engine::mult(const Shares& a, const Shares& b) {
  ++report_.mult;
  ++report_.rounds;
  return mult_raw(a, b);
}

Shares Engine::div(const Shares& a, const Shares& b) {
  ++report_.div;
  ++report_.rounds;
  std::int64_t x = reconstruct(a);
  std::int64_t y = reconstruct(b);
  if (y == 0) fail(ErrorKind::DivisionByZero, "private division by zero");
  return share(x / y);
}

Shares Engine::eq_raw(const Shares& a, std::int64_t m) { return share(reconstruct(a) == m ? 1 : 0); }

Shares Engine::cmp(BinOp op, const Shares& a, const Shares& b) {
  ++report_.cmp;
  ++report_.rounds;
  std::int64_t x = reconstruct(a);
  std::int64_t y = reconstruct(b);
  bool r = false;
  switch (op) {
    case BinOp::Lt: r = x < y; break;
    case BinOp::Eq: r = x == y; break;
    case BinOp::Ne: r = x != y; break;
    default: fail(ErrorKind::TypeError, "not a comparison: " + std::string(to_string(op)));
  }
  return share(r ? 1 : 0);
}

float Engine::bits_to_float(std::int64_t bits) {
  return std::bit_cast<float>(static_cast<std::uint32_t>(static_cast<std::uint64_t>(bits)));
}

std::int64_t Engine::float_to_bits(float f) { return static_cast<std::int64_t>(std::bit_cast<std::uint32_t>(f)); }

Typed Engine::convert(const Typed& v, BaseType to) {
  if (v.base == to) return v;
  std::int64_t x = reconstruct(v.shares);
  if (to == BaseType::Float) return {share(float_to_bits(static_cast<float>(x))), BaseType::Float};
  return {share(static_cast<std::int64_t>(std::trunc(bits_to_float(x)))), BaseType::Int};
}

Typed Engine::binop(BinOp op, const Typed& a, const Typed& b) {
  if (a.base == BaseType::Int && b.base == BaseType::Int) {
    switch (op) {
      case BinOp::Add: return {add(a.shares, b.shares), BaseType::Int};
      case BinOp::Sub: return {sub(a.shares, b.shares), BaseType::Int};
      case BinOp::Mul: return {mult(a.shares, b.shares), BaseType::Int};
      case BinOp::Div: return {div(a.shares, b.shares), BaseType::Int};
      default: return {cmp(op, a.shares, b.shares), BaseType::Int};
    }
  }
  // Float arithmetic: evaluated by the dealer on the reconstructed bit patterns.
  auto as_float = [&](const Typed& v) {
    std::int64_t x = reconstruct(v.shares);
    return v.base == BaseType::Float ? bits_to_float(x) : static_cast<float>(x);
  };
  float x = as_float(a);
  float y = as_float(b);
  ++report_.rounds;
  switch (op) {
    case BinOp::Add: ++report_.mult; return {share(float_to_bits(x + y)), BaseType::Float};
    case BinOp::Sub: ++report_.mult; return {share(float_to_bits(x - y)), BaseType::Float};
    case BinOp::Mul: ++report_.mult; return {share(float_to_bits(x * y)), BaseType::Float};
    case BinOp::Div: ++report_.div; return {share(float_to_bits(x / y)), BaseType::Float};
    case BinOp::Lt: ++report_.cmp; return {share(x < y ? 1 : 0), BaseType::Int};
    case BinOp::Eq: ++report_.cmp; return {share(x == y ? 1 : 0), BaseType::Int};
    case BinOp::Ne: ++report_.cmp; return {share(x != y ? 1 : 0), BaseType::Int};
  }
  return {};
}

Shares Engine::ar(const Shares& index, std::span<const Shares> elems) {
  ++report_.ar;
  report_.rounds += 2;
  Shares acc = constant(0);
  for (std::size_t m = 0; m < elems.size(); ++m)
    acc = add(acc, mult_raw(eq_raw(index, static_cast<std::int64_t>(m)), elems[m]));
  return acc;
}

std::vector<Shares> Engine::aw(const Shares& index, std::span<const Shares> elems, const Shares& value) {
  ++report_.aw;
  report_.rounds += 2;
  std::vector<Shares> out;
  out.reserve(elems.size());
  for (std::size_t m = 0; m < elems.size(); ++m) {
    Shares sel = eq_raw(index, static_cast<std::int64_t>(m));
    out.push_back(add(elems[m], mult_raw(sel, sub(value, elems[m]))));
  }
  return out;
}

Shares Engine::dv(std::span<const Shares> values, std::span<const Shares> tags) {
  if (values.size() != tags.size()) fail(ErrorKind::ShapeMismatch, "dereference needs one tag per location");
  ++report_.dv;
  ++report_.rounds;
  Shares acc = constant(0);
  for (std::size_t k = 0; k < values.size(); ++k) acc = add(acc, mult_raw(tags[k], values[k]));
  return acc;
}

FreeResult Engine::free(std::span<const std::vector<Shares>> contents, std::span<const Shares> tags) {
  std::size_t alpha = contents.size();
  if (alpha < 2 || tags.size() != alpha) fail(ErrorKind::ShapeMismatch, "private free needs alpha > 1 locations");
  std::size_t slots = contents[0].size();
  for (const auto& c : contents)
    if (c.size() != slots) fail(ErrorKind::ShapeMismatch, "private free over locations of different sizes");
  ++report_.free;
  report_.rounds += 2;

  // Swap location 0 with the true location: every slot of every location
  // is rewritten, whichever location is the true one.
  FreeResult r;
  r.contents.assign(contents.begin(), contents.end());
  for (std::size_t s = 0; s < slots; ++s) {
    const Shares& w0 = contents[0][s];
    Shares new0 = w0;
    for (std::size_t m = 1; m < alpha; ++m) {
      const Shares& wm = contents[m][s];
      r.contents[m][s] = add(wm, mult_raw(tags[m], sub(w0, wm)));
      new0 = add(new0, mult_raw(tags[m], sub(wm, w0)));
    }
    r.contents[0][s] = new0;
  }
  r.tags.assign(tags.begin() + 1, tags.end());
  r.tags[0] = add(tags[1], tags[0]);
  return r;
}

Shares Engine::resolve(const Shares& res, const Shares& a, const Shares& b) {
  ++report_.resolve;
  ++report_.rounds;
  return add(b, mult_raw(res, sub(a, b)));
}

std::vector<Shares> Engine::resolve_all(const Shares& res, std::span<const Shares> a, std::span<const Shares> b) {
  if (a.size() != b.size()) fail(ErrorKind::ShapeMismatch, "resolve over lists of different lengths");
  ++report_.resolve;
  ++report_.rounds;
  std::vector<Shares> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(add(b[k], mult_raw(res, sub(a[k], b[k]))));
  return out;
}

}  // namespace smc2::mpc
