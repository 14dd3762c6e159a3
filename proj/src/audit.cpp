#include "devaudit/audit.hpp"

#include <set>

#include "devaudit/error.hpp"
#include "parallel.hpp"
#include "text.hpp"

namespace devaudit {

std::string_view to_string(ReplayStatus status) {
  switch (status) {
    case ReplayStatus::WelfareOutsideDomain: return "welfare-outside-domain";
    case ReplayStatus::EdgeDeleted: return "edge-deleted";
    case ReplayStatus::RuleValueChanged: return "rule-value-changed";
    case ReplayStatus::SuccessorNotAdmitted: return "successor-not-admitted";
    case ReplayStatus::WelfareComparisonChanged: return "welfare-comparison-changed";
    case ReplayStatus::UnsafeUpdate: return "unsafe-update";
    case ReplayStatus::SameManipulationWitness: return "same-manipulation-witness";
  }
  return "?";
}

std::string ReplayResult::label() const {
  if (status == ReplayStatus::SameManipulationWitness && boundary) return "boundary-witness";
  return std::string(to_string(status));
}

bool AuditEnvironment::admissible_report(const Profile& p) const {
  if (!report_domain.contains(p) && !rule.is_overlay_row(p)) return false;
  if (survivors) return std::find(survivors->begin(), survivors->end(), p) != survivors->end();
  return true;
}

// ------------------------------------------------------------ factor closure

std::optional<ProfileMidpointGap> fibre_factor_gap(const std::vector<Profile>& survivors, int agents) {
  std::vector<Profile> states;
  std::set<Profile> seen;
  for (const auto& p : survivors) {
    if (seen.insert(p).second) states.push_back(p);
  }
  const auto k = states.size();
  std::vector<std::uint32_t> diff(k * k);
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t t = 0; t < k; ++t) diff[s * k + t] = changed_agents(states[s], states[t]).mask();
  }
  const auto labels = all_labels(agents);
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t t = 0; t < k; ++t) {
      const auto d = diff[s * k + t];
      // Distinct (s→u, u→t) change-set pairs over surviving midpoints.
      std::set<std::pair<std::uint32_t, std::uint32_t>> legs;
      for (std::size_t u = 0; u < k; ++u) legs.emplace(diff[s * k + u], diff[u * k + t]);
      for (Coalition c : labels) {
        for (Coalition e : labels) {
          if ((d & ~(c | e).mask()) != 0) continue;
          bool found = false;
          for (const auto& [a, b] : legs) {
            if ((a & ~c.mask()) == 0 && (b & ~e.mask()) == 0) {
              found = true;
              break;
            }
          }
          if (!found) return ProfileMidpointGap{states[s], c, e, states[t]};
        }
      }
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------------- replay

namespace {

std::vector<Profile> corner_hull(const Profile& p, const Profile& q) {
  const auto changed = changed_agents(p, q).members();
  std::vector<Profile> out;
  const std::uint32_t corners = 1u << changed.size();
  for (std::uint32_t bits = 0; bits < corners; ++bits) {
    Profile mix = p;
    for (std::size_t k = 0; k < changed.size(); ++k) {
      if (bits & (1u << (changed.size() - 1 - k))) {
        mix[static_cast<std::size_t>(changed[k] - 1)] = q[static_cast<std::size_t>(changed[k] - 1)];
      }
    }
    out.push_back(std::move(mix));
  }
  return out;
}

}  // namespace

ReplayResult replay_witness(const WitnessRecord& w, const AuditEnvironment& env) {
  const auto n = w.truth.size();
  if (n == 0 || w.current.size() != n || w.deviated.size() != n) {
    raise(ErrorCode::MalformedWitness, "witness profiles must have the same positive length");
  }
  if (static_cast<int>(n) != env.rule.agents()) raise(ErrorCode::MalformedWitness, "witness has the wrong number of agents");
  if (w.coalition.empty() || !w.coalition.subset_of(Coalition::grand(static_cast<int>(n)))) {
    raise(ErrorCode::MalformedWitness, "witness coalition must be a non-empty subset of the agents");
  }
  const auto m = env.rule.alternatives().size();
  if (w.x < 0 || w.x >= m || w.y < 0 || w.y >= m) raise(ErrorCode::MalformedWitness, "witness outcome out of range");

  ReplayResult result;
  auto done = [&](ReplayStatus s) {
    result.status = s;
    return result;
  };
  // 1-2: admissibility of the welfare profile and the two reports.
  if (!env.true_domain.contains(w.truth)) return done(ReplayStatus::WelfareOutsideDomain);
  if (!env.admissible_report(w.current) || !env.admissible_report(w.deviated)) return done(ReplayStatus::EdgeDeleted);
  // 3-4: rule values.
  const auto x = env.rule.try_apply(w.current);
  const auto y = env.rule.try_apply(w.deviated);
  if (!x || !y || *x != w.x || *y != w.y) return done(ReplayStatus::RuleValueChanged);
  // 5: the labelled successor.
  if (!agrees_outside(w.current, w.deviated, w.coalition)) return done(ReplayStatus::SuccessorNotAdmitted);
  // 6: welfare comparison at R.
  if (!improvement_holds(w.truth, w.coalition, w.y, w.x)) return done(ReplayStatus::WelfareComparisonChanged);
  // 7: exact union-composition of the surviving fibre.
  std::vector<Profile> fibre;
  if (env.survivors) {
    for (const auto& p : *env.survivors) {
      if (env.report_domain.contains(p) || env.rule.is_overlay_row(p)) fibre.push_back(p);
    }
  } else {
    for (auto& p : corner_hull(w.current, w.deviated)) {
      if (env.admissible_report(p)) fibre.push_back(std::move(p));
    }
  }
  if (auto gap = fibre_factor_gap(fibre, env.rule.agents())) {
    result.gap = std::move(gap);
    return done(ReplayStatus::UnsafeUpdate);
  }
  // 8.
  result.boundary = env.rule.is_overlay_row(w.deviated) && !env.report_domain.contains(w.deviated);
  return done(ReplayStatus::SameManipulationWitness);
}

// ----------------------------------------------------------- boundary audit

std::vector<BoundaryRecord> boundary_audit(const Rule& extension, const ProfileSpace& truth,
                                           const ProfileSpace& base_reports, const ScanOptions& options) {
  std::vector<Profile> boundary;
  for (const auto& [q, value] : extension.overlay()) {
    if (base_reports.contains(q)) {
      const auto base = extension.apply_base(q);
      if (!base) raise(ErrorCode::OffDomainReport, "base rule undefined at report " + profile_text(q, extension.alternatives()));
      if (*base != value) {
        raise(ErrorCode::NotAnExtension, "overlay row " + profile_text(q, extension.alternatives()) +
                                             " disagrees with the base rule on the certified domain");
      }
    } else {
      boundary.push_back(q);
    }
  }
  if (!space_subset(truth, base_reports)) {
    raise(ErrorCode::TruthNotAdmissible, "the true domain is not contained in the report domain");
  }
  if (boundary.empty()) return {};

  std::vector<Coalition> coalitions;
  for (Coalition c : all_labels(extension.agents())) {
    if (!c.empty() && (options.max_coalition_size <= 0 || c.size() <= options.max_coalition_size)) coalitions.push_back(c);
  }
  std::vector<Alternative> g_values;
  for (const auto& q : boundary) g_values.push_back(extension.overlay().at(q));

  return parallel::collect<BoundaryRecord>(truth.size(), options.jobs, [&](std::uint64_t ri) {
    std::vector<BoundaryRecord> out;
    const Profile r = truth.profile(ri);
    const Alternative x = extension.apply(r);
    for (Coalition c : coalitions) {
      for (std::size_t k = 0; k < boundary.size(); ++k) {
        const auto& q = boundary[k];
        if (!agrees_outside(r, q, c)) continue;
        if (g_values[k] != x && improvement_holds(r, c, g_values[k], x, options.convention)) {
          out.push_back(BoundaryRecord{r, c, q, x, g_values[k]});
        }
      }
    }
    return out;
  });
}

// ------------------------------------------------------------ update safety

UpdateSafetyResult update_safety_audit(const Rule& rule, const Profile& truth, const ProfileSpace& reports,
                                       const std::vector<Profile>& survivors, std::uint64_t state_budget) {
  if (static_cast<int>(truth.size()) != rule.agents()) raise(ErrorCode::InvalidArgument, "true profile has the wrong length");
  for (const auto& p : survivors) {
    if (!reports.contains(p) && !rule.is_overlay_row(p)) {
      raise(ErrorCode::InvalidArgument, "survivor " + profile_text(p, rule.alternatives()) + " is not an admissible report");
    }
  }
  if (survivors.size() > state_budget) {
    raise(ErrorCode::StateBudgetExceeded, std::to_string(survivors.size()) + " survivors exceed the budget of " +
                                              std::to_string(state_budget));
  }
  UpdateSafetyResult result;
  result.gap = fibre_factor_gap(survivors, rule.agents());
  result.safe = !result.gap;
  return result;
}

std::vector<Profile> parse_profile_list(std::string_view input, const AlternativeSet& alts, int agents) {
  std::vector<Profile> out;
  for (const auto& line : text::content_lines(input)) {
    std::string_view rest;
    if (!text::take_key(line.content, "profile", rest)) throw SyntaxError(line.number, true, "expected 'profile: ...'");
    out.push_back(parse_profile(rest, alts, agents));
  }
  return out;
}

}  // namespace devaudit
