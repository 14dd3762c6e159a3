#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "devaudit/domain.hpp"
#include "devaudit/manipulation.hpp"
#include "devaudit/rule.hpp"
#include "devaudit/witness.hpp"

namespace devaudit {

enum class ReplayStatus {
  WelfareOutsideDomain,
  EdgeDeleted,
  RuleValueChanged,
  SuccessorNotAdmitted,
  WelfareComparisonChanged,
  UnsafeUpdate,
  SameManipulationWitness,
};

std::string_view to_string(ReplayStatus status);

/// Missing factor midpoint over report profiles: source E_{C∪D} target
/// survives but no surviving u has source E_C u E_D target.
struct ProfileMidpointGap {
  Profile source;
  Coalition first;
  Coalition second;
  Profile target;
};

struct ReplayResult {
  ReplayStatus status = ReplayStatus::SameManipulationWitness;
  /// Q is an overlay row outside the base report domain.
  bool boundary = false;
  std::optional<ProfileMidpointGap> gap;  // set for unsafe-update

  /// Status string; a boundary success prints as "boundary-witness".
  std::string label() const;
};

/// What a witness is replayed against. Admissible reports are the base
/// report domain plus the rule's overlay rows, further intersected with
/// `survivors` when given.
struct AuditEnvironment {
  Rule rule;
  ProfileSpace true_domain;
  ProfileSpace report_domain;
  std::optional<std::vector<Profile>> survivors;

  bool admissible_report(const Profile& p) const;
};

/// Runs the eight replay steps in order and returns the first triggered
/// status. Only the record's shape is validated up front (equal lengths,
/// non-empty coalition inside N; else Error(MalformedWitness)); a Q that
/// changes agents outside C is reported as successor-not-admitted.
ReplayResult replay_witness(const WitnessRecord& w, const AuditEnvironment& env);

/// Factor closure of a set of report profiles inside a common fibre, with
/// E_C read as agreement outside C. Scans sources and targets in the given
/// order, then label pairs in label order; returns the first gap.
std::optional<ProfileMidpointGap> fibre_factor_gap(const std::vector<Profile>& survivors, int agents);

struct BoundaryRecord {
  Profile truth;
  Coalition coalition;
  Profile deviated;
  Alternative f_of_truth = 0;
  Alternative g_of_deviated = 0;
};

/// Scans only the rows Q in 𝓜′ ∖ 𝓜 (overlay rows of `extension` outside
/// `base_reports`) that deviate from a sincere R in `truth` by some
/// coalition C with every member strictly preferring g(Q) to f(R). Records
/// come in scan order R, C (label order), Q (overlay order), one per
/// (R,C,Q). Throws Error(NotAnExtension) when an overlay row inside 𝓜
/// disagrees with the base rule, Error(TruthNotAdmissible) unless 𝓓 ⊆ 𝓜.
std::vector<BoundaryRecord> boundary_audit(const Rule& extension, const ProfileSpace& truth,
                                           const ProfileSpace& base_reports, const ScanOptions& options = {});

struct UpdateSafetyResult {
  bool safe = true;
  std::optional<ProfileMidpointGap> gap;
};

/// The public restriction of R's report fibre to `survivors` is again a
/// Dev(N)-frame iff the survivors are factor closed. Survivors must be
/// admissible reports (Error(InvalidArgument)); more than `state_budget`
/// survivors raises Error(StateBudgetExceeded).
UpdateSafetyResult update_safety_audit(const Rule& rule, const Profile& truth, const ProfileSpace& reports,
                                       const std::vector<Profile>& survivors,
                                       std::uint64_t state_budget = 4096);

/// Parses `profile: <profile>` lines (a survivor list).
std::vector<Profile> parse_profile_list(std::string_view text, const AlternativeSet& alts, int agents);

}  // namespace devaudit
