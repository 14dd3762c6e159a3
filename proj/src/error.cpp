#include "devaudit/error.hpp"

namespace devaudit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedFrame: return "MalformedFrame";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::NotDevFrame: return "NotDevFrame";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::NotSeparated: return "NotSeparated";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::OutOfRangeAgent: return "OutOfRangeAgent";
    case ErrorCode::UnknownAlternative: return "UnknownAlternative";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::OffDomainReport: return "OffDomainReport";
    case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorCode::TruthNotAdmissible: return "TruthNotAdmissible";
    case ErrorCode::EmptyCoalition: return "EmptyCoalition";
    case ErrorCode::CoalitionBudgetExceeded: return "CoalitionBudgetExceeded";
    case ErrorCode::MalformedWitness: return "MalformedWitness";
    case ErrorCode::NotAnExtension: return "NotAnExtension";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

SyntaxError::SyntaxError(std::size_t position, bool is_line, const std::string& message)
    : Error(ErrorCode::SyntaxError,
            (is_line ? "line " : "offset ") + std::to_string(position) + ": " + message),
      position_(position),
      is_line_(is_line) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace devaudit
