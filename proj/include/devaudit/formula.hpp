#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "devaudit/coalition.hpp"

namespace devaudit {

enum class FormulaKind {
  Outcome,     // o_x
  Preference,  // p_i_x_y : agent i truly ranks x above y
  Top,         // t_i_x   : x is agent i's true top
  Letter,      // plain propositional letter
  Not,
  And,
  Or,
  Implies,
  Diamond,
  Box,
};

/// Immutable coalition-modal formula. Copies share structure.
///
/// Biconditionals are desugared into a conjunction of two implications at
/// construction, so no Iff node exists. Equality and ordering compare the
/// canonical text.
class Formula {
 public:
  Formula() = default;

  static Formula outcome(std::string alternative);
  static Formula preference(int agent, std::string better, std::string worse);
  static Formula top(int agent, std::string alternative);
  static Formula letter(std::string name);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula biconditional(const Formula& lhs, const Formula& rhs);
  static Formula diamond(Coalition coalition, Formula operand);
  static Formula box(Coalition coalition, Formula operand);

  /// Left-nested folds; the list must be non-empty.
  static Formula conjunction_of(const std::vector<Formula>& parts);
  static Formula disjunction_of(const std::vector<Formula>& parts);

  bool valid() const noexcept { return node_ != nullptr; }
  FormulaKind kind() const;
  bool is_atom() const;
  bool is_modal() const;
  bool is_binary() const;

  /// Alternative (Outcome, Top), better alternative (Preference), or letter name.
  const std::string& name() const;
  /// Worse alternative of a Preference atom.
  const std::string& second_name() const;
  int agent() const;
  Coalition coalition() const;
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  /// Canonical printed form: fully parenthesised binaries, no spaces
  /// except around binary operators.
  const std::string& text() const;
  std::size_t node_count() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

  struct Node;  // opaque

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

/// Ambient signature for parsing. With an empty alternative list every
/// identifier is a plain letter (pure modal language); otherwise
/// identifiers of the shape o_x, p_i_x_y, t_i_x are social-choice atoms.
struct FormulaContext {
  int agents = 1;
  std::vector<std::string> alternatives;
};

/// Grammar:
///   phi  ::= atom | "~" phi | "(" phi op phi ")" | "<" coal ">" phi | "[" coal "]" phi
///   op   ::= "&" | "|" | "->" | "<->"
///   coal ::= "{" [int ("," int)*] "}"
/// Whitespace-insensitive. Errors: SyntaxError with byte offset (end of
/// input is reported at the last byte), Error(OutOfRangeAgent),
/// Error(UnknownAlternative).
Formula parse_formula(std::string_view text, const FormulaContext& context);

/// Parses one formula starting at `start` and returns it with the offset
/// just past it; trailing text is left to the caller.
std::pair<Formula, std::size_t> parse_formula_prefix(std::string_view text, std::size_t start,
                                                     const FormulaContext& context);

/// Distinct atoms (and letters) occurring in the formula, in first-occurrence order.
std::vector<Formula> atoms_of(const Formula& formula);

/// Every coalition label occurring in a modality.
std::vector<Coalition> coalitions_of(const Formula& formula);

}  // namespace devaudit
