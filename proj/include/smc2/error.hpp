#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smc2 {

enum class ErrorKind {
  SyntaxError,
  UnsupportedConstruct,
  UnboundVariable,
  TypeError,
  SizeMismatch,
  MalformedPointer,
  UseAfterFree,
  AddressBeyondMemory,
  DoubleFree,
  NotFreeable,
  NotEnoughShares,
  DivisionByZero,
  ShapeMismatch,
  LoopBudgetExceeded,
  ObliviousFault,
  PrivateLoopGuard,
  MissingInput,
  IndexOutOfParties,
  MalformedShare,
  Desync,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, const std::string& message);

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace smc2
