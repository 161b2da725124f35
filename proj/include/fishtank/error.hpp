#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fishtank {

enum class Errc {
  SyntaxError,
  UndeclaredSymbol,
  ArityMismatch,
  NonStaticGuard,
  UnboundConsequenceVariable,
  NamespaceClash,
  NonGroundSubject,
  BudgetExhausted,
  BuiltinTypeError,
  UnindexedQuery,
  QueueFull,
  NotQuiescent,
  CorruptJournal,
  StorageError,
};

std::string_view errc_name(Errc code);

/// Single exception type for the engine; `code()` identifies the failure.
/// Parser errors carry a 1-based source position, others leave it at 0.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, int line = 0, int column = 0);

  Errc code() const noexcept { return code_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

  bool is_validation() const noexcept;

 private:
  Errc code_;
  int line_;
  int column_;
};

}  // namespace fishtank
