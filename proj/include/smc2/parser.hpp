#pragma once

#include <string_view>

#include "smc2/ast.hpp"

namespace smc2 {

struct ParseOptions {
  Dialect dialect = Dialect::Smc2;
  // Accept the test-only declassify(e) primitive.
  bool allow_declassify = false;
};

// Throws SyntaxError (with line/col) or Error{UnsupportedConstruct}.
Program parse(std::string_view source, const ParseOptions& options = {});

// Pretty-printer; emits the dialect of the program.
std::string print(const Program& program);
std::string print(const Stmt& stmt, Dialect dialect, int indent = 0);
std::string print(const Expr& expr, Dialect dialect);

}  // namespace smc2
