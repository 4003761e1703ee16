#include "smc2/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "smc2/error.hpp"

namespace smc2 {
namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void InputSet::add_party(int party, std::string_view text) {
  auto& recs = records_[party];
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::MissingInput, "party " + std::to_string(party) + " input line " + std::to_string(lineno) +
                                        ": expected 'var = value'");
    std::string var = trim(std::string_view(t).substr(0, eq));
    std::string rhs = trim(std::string_view(t).substr(eq + 1));
    std::vector<std::string> values;
    if (!rhs.empty() && rhs.front() == '[') {
      if (rhs.back() != ']')
        fail(ErrorKind::MissingInput, "party " + std::to_string(party) + " input line " + std::to_string(lineno) +
                                          ": unterminated list");
      std::string body = rhs.substr(1, rhs.size() - 2);
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        std::string v = trim(item);
        if (!v.empty()) values.push_back(v);
      }
    } else {
      values.push_back(rhs);
    }
    recs[var].push_back(std::move(values));
  }
}

InputSet InputSet::load(const std::filesystem::path& base, int parties) {
  InputSet s;
  for (int k = 1; k <= parties; ++k) {
    std::filesystem::path p = base;
    p += "." + std::to_string(k);
    std::ifstream in(p);
    if (!in) continue;
    std::ostringstream os;
    os << in.rdbuf();
    s.add_party(k, os.str());
  }
  return s;
}

std::vector<std::string> InputSet::next(int party, const std::string& var) {
  auto pit = records_.find(party);
  if (pit != records_.end()) {
    auto vit = pit->second.find(var);
    if (vit != pit->second.end()) {
      std::size_t& c = cursor_[{party, var}];
      if (c < vit->second.size()) return vit->second[c++];
    }
  }
  fail(ErrorKind::MissingInput, "no input '" + var + "' for party " + std::to_string(party));
}

std::string format_int(long long v) { return std::to_string(v); }

std::string format_float(float v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_outputs(const Outputs& out) {
  std::string s;
  for (const auto& o : out) s += o.var + " = " + o.value + "\n";
  return s;
}

void write_outputs(const std::filesystem::path& dir, const std::vector<Outputs>& per_party) {
  for (std::size_t p = 0; p < per_party.size(); ++p) {
    std::ofstream f(dir / ("out.party" + std::to_string(p + 1) + ".txt"));
    f << format_outputs(per_party[p]);
  }
}

}  // namespace smc2
