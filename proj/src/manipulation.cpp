#include "devaudit/manipulation.hpp"

#include <limits>

#include "devaudit/error.hpp"
#include "parallel.hpp"

namespace devaudit {

bool improvement_holds(const Profile& truth, Coalition c, Alternative y, Alternative x,
                       ImprovementConvention convention) {
  if (c.empty()) return false;
  bool some_strict = false;
  for (int i : c.members()) {
    const auto& order = truth.at(static_cast<std::size_t>(i - 1));
    const bool strict = order.prefers(y, x);
    if (convention == ImprovementConvention::AllStrict && !strict) return false;
    if (!strict && y != x) return false;
    some_strict = some_strict || strict;
  }
  return some_strict;
}

// ------------------------------------------------------------------ formulas

namespace {

Formula improvement_formula(Coalition c, const std::string& y, const std::string& x, ImprovementConvention convention) {
  // For x ≠ y the weak comparison y ⪰_i x is exactly p_i_y_x.
  std::vector<Formula> prefs;
  for (int i : c.members()) prefs.push_back(Formula::preference(i, y, x));
  const Formula all = Formula::conjunction_of(prefs);
  if (convention == ImprovementConvention::AllStrict) return all;
  return Formula::conjunction(all, Formula::disjunction_of(prefs));
}

}  // namespace

Formula manipulation_formula(Coalition c, const AlternativeSet& alts, ImprovementConvention convention) {
  if (c.empty()) raise(ErrorCode::EmptyCoalition, "the manipulation formula needs a non-empty coalition");
  std::vector<Formula> disjuncts;
  for (const auto& x : alts.names()) {
    for (const auto& y : alts.names()) {
      if (x == y) continue;
      disjuncts.push_back(Formula::conjunction(
          Formula::conjunction(Formula::outcome(x), improvement_formula(c, y, x, convention)),
          Formula::diamond(c, Formula::outcome(y))));
    }
  }
  if (disjuncts.empty()) return Formula::negation(Formula::outcome(alts.name(0)));  // m = 1: never manipulable
  return Formula::disjunction_of(disjuncts);
}

Formula no_manipulation_formula(int agents, const AlternativeSet& alts) {
  std::vector<Formula> parts;
  for (int i = 1; i <= agents; ++i) parts.push_back(Formula::negation(manipulation_formula(Coalition::singleton(i), alts)));
  return Formula::conjunction_of(parts);
}

Formula no_group_manipulation_formula(int agents, const AlternativeSet& alts, int max_size,
                                      ImprovementConvention convention) {
  std::vector<Formula> parts;
  for (Coalition c : all_labels(agents)) {
    if (c.empty() || (max_size > 0 && c.size() > max_size)) continue;
    parts.push_back(Formula::negation(manipulation_formula(c, alts, convention)));
  }
  return Formula::conjunction_of(parts);
}

Formula axiom_formula(AxiomKind kind, const AlternativeSet& alts, int agents, int dictator) {
  std::vector<Formula> parts;
  switch (kind) {
    case AxiomKind::Par:
      for (const auto& x : alts.names()) {
        for (const auto& y : alts.names()) {
          if (x == y) continue;
          std::vector<Formula> unanimous;
          for (int i = 1; i <= agents; ++i) unanimous.push_back(Formula::preference(i, y, x));
          parts.push_back(Formula::implication(Formula::conjunction_of(unanimous), Formula::negation(Formula::outcome(x))));
        }
      }
      if (parts.empty()) return Formula::implication(Formula::outcome(alts.name(0)), Formula::outcome(alts.name(0)));
      break;
    case AxiomKind::Onto:
      for (const auto& x : alts.names()) parts.push_back(Formula::diamond(Coalition::grand(agents), Formula::outcome(x)));
      break;
    case AxiomKind::Dict:
      if (dictator < 1 || dictator > agents) raise(ErrorCode::OutOfRangeAgent, "dictator outside the agent set");
      for (const auto& x : alts.names()) {
        parts.push_back(Formula::implication(Formula::top(dictator, x), Formula::outcome(x)));
      }
      break;
  }
  return Formula::conjunction_of(parts);
}

// ------------------------------------------------------------- enumeration

namespace {

constexpr std::uint64_t kOutcomeCacheLimit = std::uint64_t{1} << 22;

/// Rule values per report index, cached when the report space is small.
class Outcomes {
 public:
  Outcomes(const Rule& rule, const ProfileSpace& reports) : rule_(rule) {
    if (reports.size() <= kOutcomeCacheLimit) {
      cache_.reserve(static_cast<std::size_t>(reports.size()));
      reports.for_each([&](const Profile& p, std::uint64_t) {
        cache_.push_back(rule.apply(p));
        return true;
      });
    }
  }

  Alternative at(std::uint64_t index, const Profile& p) const {
    if (!cache_.empty()) return cache_[static_cast<std::size_t>(index)];
    return rule_.apply(p);
  }

 private:
  const Rule& rule_;
  std::vector<Alternative> cache_;
};

void require_sincere(const ProfileSpace& truth, const ProfileSpace& reports) {
  if (!space_subset(truth, reports)) {
    raise(ErrorCode::TruthNotAdmissible, "the true domain is not contained in the report domain");
  }
}

void check_shapes(const Rule& rule, const ProfileSpace& truth, const ProfileSpace& reports) {
  if (truth.agents() != rule.agents() || reports.agents() != rule.agents() ||
      !(truth.alternatives() == rule.alternatives()) || !(reports.alternatives() == rule.alternatives())) {
    raise(ErrorCode::InvalidArgument, "rule and domains disagree on agents or alternatives");
  }
}

std::vector<Coalition> scan_coalitions(int agents, int max_size) {
  std::vector<Coalition> out;
  for (Coalition c : all_labels(agents)) {
    if (!c.empty() && (max_size <= 0 || c.size() <= max_size)) out.push_back(c);
  }
  return out;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

void check_group_budget(const ProfileSpace& truth, const ProfileSpace& reports, const std::vector<Coalition>& coalitions,
                        std::uint64_t budget) {
  std::uint64_t per_truth = 0;
  for (Coalition c : coalitions) {
    std::uint64_t joint = 1;
    if (reports.is_product()) {
      for (int i : c.members()) joint = sat_mul(joint, reports.options(i).size());
      joint = sat_add(joint, reports.extra().size());
    } else {
      joint = reports.size();
    }
    per_truth = sat_add(per_truth, joint);
  }
  const auto total = sat_mul(per_truth, truth.size());
  if (total > budget) {
    raise(ErrorCode::CoalitionBudgetExceeded, "group scan needs " + std::to_string(total) +
                                                  " checks, above the budget of " + std::to_string(budget) +
                                                  "; bound the coalition size");
  }
}

/// Scans one true profile; stops at the first witness unless `all`.
void scan_truth(const ProfileSpace& truth, const ProfileSpace& reports, const Outcomes& outcomes,
                const std::vector<Coalition>& coalitions, ImprovementConvention convention, std::uint64_t ri, bool all,
                std::vector<WitnessRecord>& out) {
  const Profile r = truth.profile(ri);
  const auto sincere = reports.index_of(r);
  if (!sincere) raise(ErrorCode::TruthNotAdmissible, "true profile is not an admissible report");
  const Alternative x = outcomes.at(*sincere, r);
  for (Coalition c : coalitions) {
    bool stop = false;
    reports.for_each_deviation(r, c, [&](const Profile& q, std::uint64_t qi) {
      if (qi == *sincere) return true;
      const Alternative y = outcomes.at(qi, q);
      if (y != x && improvement_holds(r, c, y, x, convention)) {
        out.push_back(WitnessRecord{r, r, c, q, x, y, "enumeration"});
        stop = !all;
      }
      return !stop;
    });
    if (stop) return;
  }
}

std::optional<WitnessRecord> first_witness(const Rule& rule, const ProfileSpace& truth, const ProfileSpace& reports,
                                           const std::vector<Coalition>& coalitions, const ScanOptions& options) {
  const Outcomes outcomes(rule, reports);
  return parallel::first_hit<WitnessRecord>(truth.size(), options.jobs, [&](std::uint64_t ri) -> std::optional<WitnessRecord> {
    std::vector<WitnessRecord> found;
    scan_truth(truth, reports, outcomes, coalitions, options.convention, ri, false, found);
    if (found.empty()) return std::nullopt;
    return found.front();
  });
}

}  // namespace

std::optional<WitnessRecord> check_strategy_proofness(const Rule& rule, const ProfileSpace& truth,
                                                      const ProfileSpace& reports, const ScanOptions& options) {
  check_shapes(rule, truth, reports);
  require_sincere(truth, reports);
  std::vector<Coalition> singles;
  for (int i = 1; i <= rule.agents(); ++i) singles.push_back(Coalition::singleton(i));
  return first_witness(rule, truth, reports, singles, options);
}

std::optional<WitnessRecord> check_group_strategy_proofness(const Rule& rule, const ProfileSpace& truth,
                                                            const ProfileSpace& reports, const ScanOptions& options) {
  check_shapes(rule, truth, reports);
  require_sincere(truth, reports);
  const auto coalitions = scan_coalitions(rule.agents(), options.max_coalition_size);
  check_group_budget(truth, reports, coalitions, options.coalition_budget);
  return first_witness(rule, truth, reports, coalitions, options);
}

std::vector<WitnessRecord> enumerate_witnesses(const Rule& rule, const ProfileSpace& truth,
                                               const ProfileSpace& reports, const ScanOptions& options) {
  check_shapes(rule, truth, reports);
  require_sincere(truth, reports);
  const auto coalitions = scan_coalitions(rule.agents(), options.max_coalition_size);
  check_group_budget(truth, reports, coalitions, options.coalition_budget);
  const Outcomes outcomes(rule, reports);
  return parallel::collect<WitnessRecord>(truth.size(), options.jobs, [&](std::uint64_t ri) {
    std::vector<WitnessRecord> found;
    scan_truth(truth, reports, outcomes, coalitions, options.convention, ri, true, found);
    return found;
  });
}

GsReport gs_condition_report(const Rule& rule, const ScanOptions& options) {
  const ProfileSpace universal(DomainSpec::universal(), rule.agents(), rule.alternatives());
  GsReport report;
  report.sp_witness = check_strategy_proofness(rule, universal, universal, options);
  report.sp = !report.sp_witness;

  const int m = rule.alternatives().size();
  const int n = rule.agents();
  std::vector<bool> attained(static_cast<std::size_t>(m), false);
  int missing = m;
  report.non_dictatorial.assign(static_cast<std::size_t>(n), false);
  int dictator_candidates = n;
  universal.for_each([&](const Profile& p, std::uint64_t) {
    const Alternative x = rule.apply(p);
    if (!attained[static_cast<std::size_t>(x)]) {
      attained[static_cast<std::size_t>(x)] = true;
      --missing;
    }
    for (int i = 1; i <= n; ++i) {
      if (!report.non_dictatorial[static_cast<std::size_t>(i - 1)] && p[static_cast<std::size_t>(i - 1)].top() != x) {
        report.non_dictatorial[static_cast<std::size_t>(i - 1)] = true;
        --dictator_candidates;
      }
    }
    return missing > 0 || dictator_candidates > 0;
  });
  report.onto = missing == 0;
  return report;
}

}  // namespace devaudit
