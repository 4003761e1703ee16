#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smc2 {

// Per-party input records. Each line is `var = value` or `var = [v1, v2, ...]`;
// `#` starts a comment. A variable may appear several times: repeated
// smcinput calls consume the records in file order.
class InputSet {
 public:
  void add_party(int party, std::string_view text);
  // Reads <base>.<k> for k = 1..parties; missing files contribute nothing.
  static InputSet load(const std::filesystem::path& base, int parties);

  // Next record of var in party's file. Throws MissingInput.
  std::vector<std::string> next(int party, const std::string& var);
  bool has_party(int party) const { return records_.count(party) != 0; }

 private:
  std::map<int, std::map<std::string, std::vector<std::vector<std::string>>>> records_;
  std::map<std::pair<int, std::string>, std::size_t> cursor_;
};

struct OutputLine {
  std::string var;
  std::string value;
  friend bool operator==(const OutputLine&, const OutputLine&) = default;
};

using Outputs = std::vector<OutputLine>;

std::string format_outputs(const Outputs& out);
void write_outputs(const std::filesystem::path& dir, const std::vector<Outputs>& per_party);

std::string format_int(long long v);
std::string format_float(float v);

}  // namespace smc2
