#include "smc2/trace.hpp"

#include <algorithm>
#include <sstream>

namespace smc2 {

std::vector<std::size_t> children(const std::vector<Code>& d, std::size_t end) {
  std::vector<std::size_t> out;
  std::size_t first = end + 1 - d[end].span;
  std::size_t at = end;  // exclusive end of the next child to the left
  while (at > first) {
    std::size_t child_end = at - 1;
    std::size_t start = child_end + 1 - d[child_end].span;
    out.push_back(start);
    at = start;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string format_codes(const std::vector<Trace>& traces) {
  std::ostringstream os;
  for (std::size_t p = 0; p < traces.size(); ++p)
    for (const auto& c : traces[p].d) os << p + 1 << ' ' << c.name << '\n';
  return os.str();
}

std::string format_locations(const std::vector<Trace>& traces) {
  std::ostringstream os;
  for (std::size_t p = 0; p < traces.size(); ++p)
    for (const auto& l : traces[p].l) os << p + 1 << ' ' << l.block << ' ' << l.offset << '\n';
  return os.str();
}

}  // namespace smc2
