#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smc2/value.hpp"

namespace smc2 {

// One evaluation code. A trace is a post-order encoding of the derivation
// tree: span counts the node and all of its descendants.
struct Code {
  std::string name;
  std::uint32_t span = 1;
  std::uint32_t acc = 0;
  friend bool operator==(const Code&, const Code&) = default;
};

struct Trace {
  std::vector<Code> d;
  std::vector<Location> l;
  friend bool operator==(const Trace&, const Trace&) = default;
};

// Child start indices of the node ending at `end` (inclusive), left to right.
std::vector<std::size_t> children(const std::vector<Code>& d, std::size_t end);

// Lines "<party> <code>" and "<party> <block> <offset>".
std::string format_codes(const std::vector<Trace>& traces);
std::string format_locations(const std::vector<Trace>& traces);

}  // namespace smc2
