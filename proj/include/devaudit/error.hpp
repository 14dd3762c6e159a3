#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace devaudit {

enum class ErrorCode {
  InvalidArgument,
  MalformedFrame,
  UnknownState,
  NotDevFrame,
  NotConnected,
  NotSeparated,
  SyntaxError,
  OutOfRangeAgent,
  UnknownAlternative,
  UnknownAtom,
  OffDomainReport,
  StateBudgetExceeded,
  TruthNotAdmissible,
  EmptyCoalition,
  CoalitionBudgetExceeded,
  MalformedWitness,
  NotAnExtension,
  DanglingReference,
  BudgetExceeded,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure. `position` is a byte offset for formulas and a 1-based
/// line number for line-oriented files; `is_line` says which.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, bool is_line, const std::string& message);

  std::size_t position() const noexcept { return position_; }
  bool is_line() const noexcept { return is_line_; }

 private:
  std::size_t position_;
  bool is_line_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace devaudit
