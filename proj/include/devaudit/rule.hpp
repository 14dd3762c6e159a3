#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "devaudit/preference.hpp"

namespace devaudit {

/// A resolute social choice function on report profiles, optionally
/// extended by overlay rows g(Q) for reports outside the base domain.
class Rule {
 public:
  enum class Kind { Plurality, Median, Dictatorship, Constant, Table };

  /// Top-vote count; ties go to the alternative ranked highest in `tiebreak`.
  static Rule plurality(int agents, AlternativeSet alts, LinearOrder tiebreak);
  /// Median of reported peaks along `axis`; `agents` must be odd.
  static Rule median(int agents, AlternativeSet alts, LinearOrder axis);
  static Rule dictatorship(int agents, AlternativeSet alts, int dictator);
  static Rule constant(int agents, AlternativeSet alts, Alternative value);
  static Rule table(int agents, AlternativeSet alts, std::map<Profile, Alternative> rows);

  Kind kind() const noexcept { return kind_; }
  int agents() const noexcept { return agents_; }
  const AlternativeSet& alternatives() const noexcept { return alts_; }
  /// Tie-break order (plurality) or axis (median).
  const LinearOrder& order() const noexcept { return order_; }
  int dictator() const noexcept { return agent_; }
  Alternative constant_value() const noexcept { return value_; }
  const std::map<Profile, Alternative>& table_rows() const noexcept { return table_; }

  /// Adds overlay rows. For table rules the rows must not already be
  /// table rows (Error(NotAnExtension)).
  Rule with_overlay(std::map<Profile, Alternative> rows) const;
  /// The base rule with the overlay removed.
  Rule base_only() const;
  const std::map<Profile, Alternative>& overlay() const noexcept { return overlay_; }
  bool is_overlay_row(const Profile& p) const { return overlay_.count(p) > 0; }

  /// Overlay rows take precedence over the base rule. Throws
  /// Error(OffDomainReport) for malformed profiles or missing table rows.
  Alternative apply(const Profile& report) const;
  /// Base rule only, ignoring the overlay.
  std::optional<Alternative> apply_base(const Profile& report) const;
  std::optional<Alternative> try_apply(const Profile& report) const;

  /// One-line description, e.g. "plurality tiebreak a > b > c".
  std::string describe() const;

 private:
  Rule(Kind kind, int agents, AlternativeSet alts);

  Kind kind_;
  int agents_;
  AlternativeSet alts_;
  LinearOrder order_;
  int agent_ = 0;
  Alternative value_ = 0;
  std::map<Profile, Alternative> table_;
  std::map<Profile, Alternative> overlay_;
};

/// Parses a RULE file:
///   agents: <n>
///   alternatives: a b c          (optional when the rule line names an order)
///   rule plurality tiebreak a > b > c
///   rule median axis a < b < c < d
///   rule dictator <i>
///   rule constant <alt>
///   rule table                    followed by `row <profile> -> <alt>` lines
///   extend                        followed by overlay `row` lines
/// Throws SyntaxError (line-based) and the usual value errors.
Rule parse_rule(std::string_view text);

/// Serialises a rule in the format accepted by parse_rule.
std::string print_rule(const Rule& rule);

}  // namespace devaudit
