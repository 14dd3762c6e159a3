#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "devaudit/frame.hpp"

namespace devaudit {

enum class ScenarioKind {
  DevImpliesMixing,
  FactorClosureCharacterizes,
  MissingCornerInDev,
  NonProductComponent,
  SafeLineDeletion,
  UnsafePublicDeletion,
  UpdateBreaksComposition,
  WitnessSurvivesUnsafe,
  RepairOneCorner,
  NewWitnessOldOrBoundary,
  BoundaryRowCreatesWitness,
};

std::string_view to_string(ScenarioKind kind);
/// Throws Error(InvalidArgument) for an unknown name.
ScenarioKind parse_scenario_kind(std::string_view name);
const std::vector<ScenarioKind>& all_scenarios();

/// Whether a SAT outcome is the expected one (run) or a counterexample
/// (check).
bool scenario_expects_sat(ScenarioKind kind);

struct Scenario {
  ScenarioKind kind = ScenarioKind::DevImpliesMixing;
  /// Frame scenarios: largest state count searched. Ignored by the two
  /// social-choice scenarios, whose states are the 2^agents report profiles
  /// over two alternatives.
  int max_states = 6;
  /// Search only frames with exactly max_states states.
  bool exact = false;
  int agents = 2;
  unsigned jobs = 1;

  /// Default bounds for a kind (6 states for the checks, exactly 2 for the
  /// non-product search, exactly 4 for the update searches).
  static Scenario defaults(ScenarioKind kind);
};

struct SearchResult {
  bool sat = false;
  /// Frame instance (SAT only). For the social-choice scenarios it is the
  /// report frame of the listed profiles.
  std::optional<LabelledFrame> frame;
  /// Scenario-specific `key: value` notes: survivors, witness, added corner.
  std::vector<std::string> annotations;
  /// Frames or instances examined.
  std::uint64_t examined = 0;
};

/// Enumerates Dev(N)-frames by state count, each given by one equivalence
/// per agent with pairwise commuting relations (E_C is then the composite
/// over C), in restricted-growth-string order. The first instance in this
/// order is returned and re-verified with the frame and audit operations.
/// Throws Error(BudgetExceeded) past 12 states, 4 agents or 10^7 candidate
/// frames per state count.
SearchResult run_scenario(const Scenario& scenario);

/// SAT / UNSAT line, the FRAME text and `# ` annotation lines.
std::string print_search_result(const Scenario& scenario, const SearchResult& result);

/// All set partitions of {0..k-1} as block ids (restricted growth strings).
std::vector<std::vector<int>> set_partitions(int k);

/// The Dev(N)-frames with k states in enumeration order.
std::vector<LabelledFrame> enumerate_dev_frames(int k, int agents);

}  // namespace devaudit
