#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "devaudit/domain.hpp"
#include "devaudit/formula.hpp"
#include "devaudit/rule.hpp"
#include "devaudit/witness.hpp"

namespace devaudit {

/// How Imp_C(y, x) reads the coalition's welfare comparison.
enum class ImprovementConvention {
  WeakAllStrictSome,  // every member weakly prefers y, some member strictly
  AllStrict,          // every member strictly prefers y
};

/// Imp_C(y, x) evaluated at true profile R.
bool improvement_holds(const Profile& truth, Coalition c, Alternative y, Alternative x,
                       ImprovementConvention convention = ImprovementConvention::WeakAllStrictSome);

/// μ_C = ⋁_{x≠y} ((o_x ∧ Imp_C(y,x)) ∧ ⟨C⟩o_y), pairs in alternative order
/// (x outer). Throws Error(EmptyCoalition).
Formula manipulation_formula(Coalition c, const AlternativeSet& alts,
                             ImprovementConvention convention = ImprovementConvention::WeakAllStrictSome);

/// ⋀_{i} ¬μ_{{i}}.
Formula no_manipulation_formula(int agents, const AlternativeSet& alts);

/// ⋀_{C≠∅} ¬μ_C over coalitions of size at most `max_size` (0 = all).
Formula no_group_manipulation_formula(int agents, const AlternativeSet& alts, int max_size = 0,
                                      ImprovementConvention convention = ImprovementConvention::WeakAllStrictSome);

enum class AxiomKind { Par, Onto, Dict };

/// Par = ⋀_{x≠y} ((⋀_i p_i_y_x) → ¬o_x); Onto = ⋀_x ⟨N⟩o_x;
/// Dict_i = ⋀_x (t_i_x → o_x).
Formula axiom_formula(AxiomKind kind, const AlternativeSet& alts, int agents, int dictator = 0);

struct ScanOptions {
  unsigned jobs = 1;
  /// Coalition sizes scanned by group checks; 0 = all.
  int max_coalition_size = 0;
  /// Upper bound on (true profile, coalition, joint report) triples.
  std::uint64_t coalition_budget = 2'000'000'000;
  ImprovementConvention convention = ImprovementConvention::WeakAllStrictSome;
};

/// First singleton witness (R,R,{i},Q,f(R),f(Q)) scanning R in true-domain
/// order, agents ascending, Q_i in report-generator order. Throws
/// Error(TruthNotAdmissible) unless 𝓓 ⊆ 𝓜.
std::optional<WitnessRecord> check_strategy_proofness(const Rule& rule, const ProfileSpace& truth,
                                                      const ProfileSpace& reports, const ScanOptions& options = {});

/// First coalition witness: R in order, coalitions by label order, joint
/// reports in generator order. Throws Error(TruthNotAdmissible),
/// Error(CoalitionBudgetExceeded).
std::optional<WitnessRecord> check_group_strategy_proofness(const Rule& rule, const ProfileSpace& truth,
                                                            const ProfileSpace& reports,
                                                            const ScanOptions& options = {});

/// Every witness at a sincere state, in the group scan order.
std::vector<WitnessRecord> enumerate_witnesses(const Rule& rule, const ProfileSpace& truth,
                                               const ProfileSpace& reports, const ScanOptions& options = {});

/// The three conditions of the impossibility theorem for one rule on the
/// universal domain.
struct GsReport {
  bool sp = false;
  bool onto = false;
  std::vector<bool> non_dictatorial;  // index i-1 for agent i
  std::optional<WitnessRecord> sp_witness;
};

GsReport gs_condition_report(const Rule& rule, const ScanOptions& options = {});

}  // namespace devaudit
