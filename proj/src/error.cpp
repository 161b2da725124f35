#include "fishtank/error.hpp"

namespace fishtank {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UndeclaredSymbol: return "UndeclaredSymbol";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::NonStaticGuard: return "NonStaticGuard";
    case Errc::UnboundConsequenceVariable: return "UnboundConsequenceVariable";
    case Errc::NamespaceClash: return "NamespaceClash";
    case Errc::NonGroundSubject: return "NonGroundSubject";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::BuiltinTypeError: return "BuiltinTypeError";
    case Errc::UnindexedQuery: return "UnindexedQuery";
    case Errc::QueueFull: return "QueueFull";
    case Errc::NotQuiescent: return "NotQuiescent";
    case Errc::CorruptJournal: return "CorruptJournal";
    case Errc::StorageError: return "StorageError";
  }
  return "Unknown";
}

namespace {

std::string format_message(Errc code, const std::string& message, int line, int column) {
  std::string out(errc_name(code));
  if (line > 0) {
    out += " at " + std::to_string(line) + ":" + std::to_string(column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message, int line, int column)
    : std::runtime_error(format_message(code, message, line, column)),
      code_(code),
      line_(line),
      column_(column) {}

bool Error::is_validation() const noexcept {
  switch (code_) {
    case Errc::SyntaxError:
    case Errc::UndeclaredSymbol:
    case Errc::ArityMismatch:
    case Errc::NonStaticGuard:
    case Errc::UnboundConsequenceVariable:
    case Errc::NamespaceClash:
      return true;
    default:
      return false;
  }
}

}  // namespace fishtank
