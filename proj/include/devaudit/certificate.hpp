#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "devaudit/formula.hpp"
#include "devaudit/model.hpp"

namespace devaudit {

/// Typed finite certificate for a pure coalition-modal formula.
struct Certificate {
  struct DiamondPointer {
    std::size_t state;
    Formula formula;  // a diamond in the closure
    std::size_t target;
    std::size_t line;
  };
  struct FactorPointer {
    std::size_t source;
    Coalition first;
    Coalition second;
    std::size_t target;
    std::size_t midpoint;
    std::size_t line;
  };

  std::vector<std::string> states;
  std::size_t root = 0;
  int agents = 0;
  std::vector<Coalition> labels;  // in written order; every label over {1..agents}
  Formula formula;
  std::vector<Formula> closure;
  /// types[t][k] says whether closure[k] is claimed true at state t.
  std::vector<std::vector<bool>> types;
  /// Pairs per label mask, identity loops included.
  std::map<std::uint32_t, std::vector<std::pair<std::size_t, std::size_t>>> relations;
  std::vector<DiamondPointer> diamonds;
  std::vector<FactorPointer> factors;

  std::optional<std::size_t> closure_index(const Formula& f) const;
};

/// Parses the line-based certificate format:
///   states: s0 s1 ...
///   root: s0
///   labels: {} {1} {2} {1,2}
///   formula: <phi>
///   closure: <phi> ; <phi> ; ...
///   types: s0 = <phi>, <phi>, ...      (one line per state; absent = empty)
///   relations {1}: (s0,s1) ...         (absent label = identity)
///   diamonds: s0 <phi> -> s1
///   factors: s0 {1}{2} s1 -> s0
/// Formulas use plain letters only. Throws SyntaxError (line numbers; 0 for
/// a missing required key) and Error(DanglingReference).
Certificate parse_certificate(std::string_view text);

struct CertificateFailure {
  std::string row_kind;  // type-row, frame-row, union-row, box-row, diamond-row, pointer-row, root-row
  std::string location;
  std::string reason;
};

struct VerifyResult {
  bool accepted = false;
  std::optional<CertificateFailure> failure;
};

/// Checks, in order: Boolean type rows, equivalence rows, identity and
/// inclusion rows, exact union-composition (all midpoints scanned), box
/// rows, diamond rows, diamond and factor pointers, and the root row.
/// Reports the first failing row.
VerifyResult verify_certificate(const Certificate& cert);

/// The certificate's tables as an explicit model; letters true at t are
/// the letters in λ(t).
ExplicitModel certificate_model(const Certificate& cert);

}  // namespace devaudit
