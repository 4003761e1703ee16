#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "smc2/ast.hpp"

namespace smc2 {

using BlockId = std::uint64_t;

struct Location {
  BlockId block = 0;
  std::int64_t offset = 0;  // byte offset within the block

  friend auto operator<=>(const Location&, const Location&) = default;
};

std::string to_string(const Location& l);

// Pointer payload: alpha = locs.size() candidate locations, exactly one of which
// is logically tagged 1. Tags are plaintext 0/1 for public pointers and
// party-local shares for private pointers.
struct PointerData {
  std::vector<Location> locs;
  std::vector<std::uint64_t> tags;
  int depth = 1;

  std::size_t alpha() const { return locs.size(); }
  friend bool operator==(const PointerData&, const PointerData&) = default;
};

// A party-local runtime value.
struct Value {
  enum class Kind : std::uint8_t { Void, Int, Float, Share, Loc, Ptr, Array };

  Kind kind = Kind::Void;
  std::int32_t i = 0;
  float f = 0.0F;
  std::uint64_t share = 0;
  BaseType base = BaseType::Int;  // plaintext base type behind a share
  Location loc;
  PointerData ptr;
  std::vector<Value> elems;

  static Value none() { return {}; }
  static Value of_int(std::int32_t v);
  static Value of_float(float v);
  static Value of_share(std::uint64_t s, BaseType base);
  static Value of_loc(Location l);
  static Value of_ptr(PointerData p);
  static Value of_array(std::vector<Value> elems);

  bool is(Kind k) const { return kind == k; }
  friend bool operator==(const Value&, const Value&) = default;
};

std::string to_string(const Value& v);

}  // namespace smc2
