#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "devaudit/domain.hpp"
#include "devaudit/model.hpp"
#include "devaudit/rule.hpp"

namespace devaudit {

inline constexpr std::uint64_t kDefaultStateBudget = 1'000'000;

struct BiprofileOptions {
  enum class Mode { Explicit, Lazy };
  Mode mode = Mode::Explicit;
  std::uint64_t state_budget = kDefaultStateBudget;
  /// Require 𝓓 ⊆ 𝓜 so every sincere state (R,R) exists.
  bool require_sincere = false;
};

/// The model over states (R,P) with R in the true domain and P in the
/// report domain. State index = r * |𝓜| + p. (R,P) E_C (R,Q) iff Q is in
/// the report domain and agrees with P outside C. Outcome atoms read P,
/// preference and top atoms read R.
///
/// Explicit mode precomputes every rule value and enforces the state
/// budget; lazy mode computes outcomes on demand. Successors are generated
/// from the report domain in both modes.
class BiprofileModel : public ModelView {
 public:
  /// Throws Error(StateBudgetExceeded), Error(TruthNotAdmissible),
  /// Error(OffDomainReport) (explicit mode, rule undefined on a report).
  BiprofileModel(Rule rule, ProfileSpace true_domain, ProfileSpace report_domain, BiprofileOptions options = {});

  const Rule& rule() const noexcept { return rule_; }
  const ProfileSpace& true_domain() const noexcept { return truth_; }
  const ProfileSpace& report_domain() const noexcept { return reports_; }
  bool is_explicit() const noexcept { return !outcomes_.empty(); }

  std::size_t state_of(std::uint64_t r, std::uint64_t p) const { return static_cast<std::size_t>(r * reports_.size() + p); }
  std::optional<std::size_t> state_of(const Profile& truth, const Profile& report) const;
  /// (R,R); throws Error(TruthNotAdmissible) if R is not a report.
  std::size_t sincere_state(const Profile& truth) const;
  Profile truth_at(std::size_t s) const { return truth_.profile(s / reports_.size()); }
  Profile report_at(std::size_t s) const { return reports_.profile(s % reports_.size()); }
  Alternative outcome_at(std::size_t s) const;
  /// Indices of every sincere state, in true-domain order.
  std::vector<std::size_t> sincere_states() const;

  int agents() const override { return truth_.agents(); }
  std::size_t state_count() const override { return count_; }
  std::string state_name(std::size_t s) const override;
  bool knows_atom(const Formula& atom) const override;
  bool atom_holds(const Formula& atom, std::size_t s) const override;
  void for_each_successor(Coalition c, std::size_t s,
                          const std::function<bool(std::size_t)>& visit) const override;

  /// Materialises the model as an ExplicitModel over a LabelledFrame with
  /// every label relation; intended for small instances. The valuation
  /// holds every o/p/t atom true at each state.
  ExplicitModel to_explicit(std::size_t max_states = 4096) const;

 private:
  Rule rule_;
  ProfileSpace truth_;
  ProfileSpace reports_;
  std::size_t count_ = 0;
  std::vector<Alternative> outcomes_;  // per report index, explicit mode only
};

}  // namespace devaudit
