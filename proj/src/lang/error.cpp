#include "smc2/error.hpp"

namespace smc2 {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::MalformedPointer: return "MalformedPointer";
    case ErrorKind::UseAfterFree: return "UseAfterFree";
    case ErrorKind::AddressBeyondMemory: return "AddressBeyondMemory";
    case ErrorKind::DoubleFree: return "DoubleFree";
    case ErrorKind::NotFreeable: return "NotFreeable";
    case ErrorKind::NotEnoughShares: return "NotEnoughShares";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::LoopBudgetExceeded: return "LoopBudgetExceeded";
    case ErrorKind::ObliviousFault: return "ObliviousFault";
    case ErrorKind::PrivateLoopGuard: return "PrivateLoopGuard";
    case ErrorKind::MissingInput: return "MissingInput";
    case ErrorKind::IndexOutOfParties: return "IndexOutOfParties";
    case ErrorKind::MalformedShare: return "MalformedShare";
    case ErrorKind::Desync: return "Desync";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

SyntaxError::SyntaxError(int line, int col, const std::string& message)
    : Error(ErrorKind::SyntaxError,
            std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      line_(line),
      col_(col) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace smc2
