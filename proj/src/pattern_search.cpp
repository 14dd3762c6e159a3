#include "devaudit/pattern_search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include "devaudit/audit.hpp"
#include "devaudit/error.hpp"
#include "devaudit/manipulation.hpp"
#include "parallel.hpp"

namespace devaudit {

namespace {

struct KindInfo {
  ScenarioKind kind;
  std::string_view name;
  bool expects_sat;
  int states;
  bool exact;
};

constexpr std::array<KindInfo, 11> kKinds{{
    {ScenarioKind::DevImpliesMixing, "dev-implies-mixing", false, 6, false},
    {ScenarioKind::FactorClosureCharacterizes, "factor-closure-characterizes", false, 6, false},
    {ScenarioKind::MissingCornerInDev, "missing-corner-in-dev", false, 6, false},
    {ScenarioKind::NonProductComponent, "non-product-component", true, 2, true},
    {ScenarioKind::SafeLineDeletion, "safe-line-deletion", true, 4, true},
    {ScenarioKind::UnsafePublicDeletion, "unsafe-public-deletion", true, 4, true},
    {ScenarioKind::UpdateBreaksComposition, "update-breaks-composition", true, 4, true},
    {ScenarioKind::WitnessSurvivesUnsafe, "witness-survives-unsafe", true, 4, true},
    {ScenarioKind::RepairOneCorner, "repair-one-corner", true, 4, true},
    {ScenarioKind::NewWitnessOldOrBoundary, "new-witness-old-or-boundary", false, 0, true},
    {ScenarioKind::BoundaryRowCreatesWitness, "boundary-row-creates-witness", true, 0, true},
}};

const KindInfo& info(ScenarioKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  raise(ErrorCode::InvalidArgument, "unknown scenario");
}

bool is_social(ScenarioKind kind) {
  return kind == ScenarioKind::NewWitnessOldOrBoundary || kind == ScenarioKind::BoundaryRowCreatesWitness;
}

constexpr int kMaxSearchStates = 12;
constexpr int kMaxSearchAgents = 4;
constexpr std::uint64_t kMaxCandidates = 10'000'000;

using Rows = std::vector<std::uint32_t>;

Rows compose(const Rows& a, const Rows& b) {
  Rows out(a.size(), 0);
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t u = 0; u < a.size(); ++u) {
      if (a[s] >> u & 1u) out[s] |= b[u];
    }
  }
  return out;
}

Rows partition_rows(const std::vector<int>& blocks) {
  Rows rows(blocks.size(), 0);
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    for (std::size_t t = 0; t < blocks.size(); ++t) {
      if (blocks[s] == blocks[t]) rows[s] |= 1u << t;
    }
  }
  return rows;
}

std::vector<std::string> state_names(std::size_t k, char prefix) {
  std::vector<std::string> names;
  for (std::size_t s = 0; s < k; ++s) names.push_back(prefix + std::to_string(s));
  return names;
}

class FrameSpace {
 public:
  FrameSpace(int k, int agents) : k_(k), agents_(agents) {
    for (const auto& p : set_partitions(k)) partitions_.push_back(partition_rows(p));
    count_ = 1;
    for (int i = 0; i < agents; ++i) {
      if (count_ > kMaxCandidates / partitions_.size()) {
        raise(ErrorCode::BudgetExceeded, "more than " + std::to_string(kMaxCandidates) + " candidate frames");
      }
      count_ *= partitions_.size();
    }
  }

  std::uint64_t count() const { return count_; }

  /// Label relations for candidate `index`, or nothing when the singleton
  /// relations do not commute.
  std::optional<std::vector<Rows>> relations(std::uint64_t index) const {
    std::vector<const Rows*> single(static_cast<std::size_t>(agents_));
    for (int i = agents_ - 1; i >= 0; --i) {
      single[static_cast<std::size_t>(i)] = &partitions_[index % partitions_.size()];
      index /= partitions_.size();
    }
    for (std::size_t i = 0; i < single.size(); ++i) {
      for (std::size_t j = i + 1; j < single.size(); ++j) {
        if (compose(*single[i], *single[j]) != compose(*single[j], *single[i])) return std::nullopt;
      }
    }
    std::vector<Rows> rel(std::size_t{1} << agents_);
    rel[0].assign(static_cast<std::size_t>(k_), 0);
    for (std::size_t s = 0; s < static_cast<std::size_t>(k_); ++s) rel[0][s] = 1u << s;
    for (std::uint32_t mask = 1; mask < rel.size(); ++mask) {
      const int top = 31 - std::countl_zero(mask);
      rel[mask] = compose(rel[mask & ~(1u << top)], *single[static_cast<std::size_t>(top)]);
    }
    return rel;
  }

  LabelledFrame frame(const std::vector<Rows>& rel) const {
    LabelledFrame f(agents_, state_names(static_cast<std::size_t>(k_), 's'));
    for (std::uint32_t mask = 1; mask < rel.size(); ++mask) {
      const auto c = Coalition::from_mask(mask);
      f.mark_declared(c);
      for (int s = 0; s < k_; ++s) {
        for (int t = 0; t < k_; ++t) {
          if (rel[mask][static_cast<std::size_t>(s)] >> t & 1u) f.add_pair(c, static_cast<StateIndex>(s), static_cast<StateIndex>(t));
        }
      }
    }
    return f;
  }

 private:
  int k_;
  int agents_;
  std::vector<Rows> partitions_;
  std::uint64_t count_ = 0;
};

std::vector<StateIndex> members(std::uint32_t mask) {
  std::vector<StateIndex> out;
  for (StateIndex s = 0; mask != 0; ++s, mask >>= 1) {
    if (mask & 1u) out.push_back(s);
  }
  return out;
}

std::string state_list(const LabelledFrame& f, const std::vector<StateIndex>& states) {
  std::string out;
  for (auto s : states) out += (out.empty() ? "" : " ") + f.name(s);
  return out;
}

std::string gap_text(const LabelledFrame& f, const MissingMidpoint& m) {
  return f.name(m.source) + " " + m.first.to_string() + m.second.to_string() + " " + f.name(m.target);
}

struct Hit {
  std::vector<std::string> annotations;
};

bool dev_frame(const LabelledFrame& f) { return check_dev_laws(f).passed; }

// ------------------------------------------------------- frame predicates

std::optional<Hit> mixing_failure(const LabelledFrame& f) {
  const Coalition n = f.grand();
  for (StateIndex s = 0; s < f.size(); ++s) {
    for (StateIndex t = 0; t < f.size(); ++t) {
      if (!f.related(n, s, t)) continue;
      for (Coalition c : all_labels(f.agents())) {
        if ((f.successors(c, s) & f.successors(c.complement(f.agents()), t)).none()) {
          return Hit{{"pair: " + f.name(s) + " " + f.name(t), "label: " + c.to_string()}};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Hit> missing_corner(const LabelledFrame& f) {
  const Coalition n = f.grand();
  for (StateIndex s = 0; s < f.size(); ++s) {
    for (StateIndex t = 0; t < f.size(); ++t) {
      if (!f.related(n, s, t)) continue;
      for (Coalition c : all_labels(f.agents())) {
        const Coalition rest = c.complement(f.agents());
        bool found = false;
        for (StateIndex u = 0; u < f.size() && !found; ++u) found = f.related(c, s, u) && f.related(rest, u, t);
        if (!found) return Hit{{"corner: " + f.name(s) + " " + c.to_string() + rest.to_string() + " " + f.name(t)}};
      }
    }
  }
  return std::nullopt;
}

std::optional<Hit> characterization_failure(const LabelledFrame& f) {
  const std::uint32_t all = (1u << f.size()) - 1;
  for (std::uint32_t u = 1; u <= all; ++u) {
    const auto survivors = members(u);
    const bool closed = factor_closure_unchecked(f, survivors).closed;
    const bool dev = dev_frame(restrict_frame(f, survivors));
    if (closed != dev) {
      return Hit{{"survivors: " + state_list(f, survivors), std::string("factor-closed: ") + (closed ? "yes" : "no"),
                  std::string("restriction-dev: ") + (dev ? "yes" : "no")}};
    }
  }
  return std::nullopt;
}

std::optional<Hit> non_product(const LabelledFrame& f) {
  for (const auto& component : grand_components(f)) {
    const auto verdict = coordinate_separation_check(f, component);
    if (!verdict.separated) {
      const auto [s, t] = *verdict.counterexample;
      return Hit{{"component: " + state_list(f, component), "unseparated: " + f.name(s) + " " + f.name(t)}};
    }
  }
  return std::nullopt;
}

/// Scans proper non-empty survivor sets in bitmask order.
template <class Test>
std::optional<Hit> scan_survivors(const LabelledFrame& f, Test test) {
  const std::uint32_t all = (1u << f.size()) - 1;
  for (std::uint32_t u = 1; u < all; ++u) {
    if (auto hit = test(members(u), u)) return hit;
  }
  return std::nullopt;
}

std::optional<Hit> safe_line(const LabelledFrame& f) {
  const auto components = grand_components(f);
  if (components.size() != 1 || !coordinate_separation_check(f, components.front()).separated) return std::nullopt;
  // Both coordinates non-trivial: the frame is a genuine grid.
  for (int i = 1; i <= f.agents(); ++i) {
    if (f.successors(Coalition::singleton(i), 0).count() < 2) return std::nullopt;
  }
  return scan_survivors(f, [&](const std::vector<StateIndex>& u, std::uint32_t) -> std::optional<Hit> {
    if (u.size() < 2) return std::nullopt;
    for (int i = 1; i <= f.agents(); ++i) {
      const Coalition c = Coalition::singleton(i);
      bool line = true;
      for (auto s : u) line = line && f.successors(c, u.front()).test(s);
      if (line && factor_closure_check(f, u).closed && dev_frame(restrict_frame(f, u))) {
        return Hit{{"survivors: " + state_list(f, u), "line-label: " + c.to_string()}};
      }
    }
    return std::nullopt;
  });
}

std::optional<Hit> unsafe_deletion(const LabelledFrame& f) {
  return scan_survivors(f, [&](const std::vector<StateIndex>& u, std::uint32_t) -> std::optional<Hit> {
    const auto verdict = factor_closure_check(f, u);
    if (verdict.closed || dev_frame(restrict_frame(f, u))) return std::nullopt;
    return Hit{{"survivors: " + state_list(f, u), "missing-midpoint: " + gap_text(f, *verdict.missing)}};
  });
}

std::optional<Hit> composition_break(const LabelledFrame& f) {
  return scan_survivors(f, [&](const std::vector<StateIndex>& u, std::uint32_t) -> std::optional<Hit> {
    const auto restricted = restrict_frame(f, u);
    for (const auto& v : check_dev_laws(restricted).violations) {
      if (v.law == DevLaw::D4Forward || v.law == DevLaw::D4Reverse) {
        return Hit{{"survivors: " + state_list(f, u), "violation: " + v.describe(restricted)}};
      }
    }
    return std::nullopt;
  });
}

std::optional<Hit> witness_survives(const LabelledFrame& f) {
  return scan_survivors(f, [&](const std::vector<StateIndex>& u, std::uint32_t) -> std::optional<Hit> {
    const auto verdict = factor_closure_check(f, u);
    if (verdict.closed) return std::nullopt;
    for (auto s : u) {
      for (auto t : u) {
        if (s == t) continue;
        for (int i = 1; i <= f.agents(); ++i) {
          const Coalition c = Coalition::singleton(i);
          if (f.related(c, s, t)) {
            return Hit{{"survivors: " + state_list(f, u), "witness-edge: " + f.name(s) + " " + c.to_string() + " " + f.name(t),
                        "missing-midpoint: " + gap_text(f, *verdict.missing)}};
          }
        }
      }
    }
    return std::nullopt;
  });
}

std::optional<Hit> one_corner_repair(const LabelledFrame& f) {
  return scan_survivors(f, [&](const std::vector<StateIndex>& u, std::uint32_t mask) -> std::optional<Hit> {
    if (factor_closure_check(f, u).closed) return std::nullopt;
    for (StateIndex v = 0; v < f.size(); ++v) {
      if (mask >> v & 1u) continue;
      const auto repaired = members(mask | 1u << v);
      if (factor_closure_check(f, repaired).closed && dev_frame(restrict_frame(f, repaired))) {
        return Hit{{"survivors: " + state_list(f, u), "added-corner: " + f.name(v)}};
      }
    }
    return std::nullopt;
  });
}

std::optional<Hit> frame_predicate(ScenarioKind kind, const LabelledFrame& f) {
  switch (kind) {
    case ScenarioKind::DevImpliesMixing: return mixing_failure(f);
    case ScenarioKind::FactorClosureCharacterizes: return characterization_failure(f);
    case ScenarioKind::MissingCornerInDev: return missing_corner(f);
    case ScenarioKind::NonProductComponent: return non_product(f);
    case ScenarioKind::SafeLineDeletion: return safe_line(f);
    case ScenarioKind::UnsafePublicDeletion: return unsafe_deletion(f);
    case ScenarioKind::UpdateBreaksComposition: return composition_break(f);
    case ScenarioKind::WitnessSurvivesUnsafe: return witness_survives(f);
    case ScenarioKind::RepairOneCorner: return one_corner_repair(f);
    default: return std::nullopt;
  }
}

SearchResult search_frames(const Scenario& sc) {
  SearchResult result;
  const int lo = sc.exact ? sc.max_states : 1;
  for (int k = lo; k <= sc.max_states; ++k) {
    const FrameSpace space(k, sc.agents);
    struct Found {
      std::uint64_t index;
      Hit hit;
    };
    const auto found = parallel::first_hit<Found>(space.count(), sc.jobs, [&](std::uint64_t i) -> std::optional<Found> {
      const auto rel = space.relations(i);
      if (!rel) return std::nullopt;
      const auto f = space.frame(*rel);
      if (!dev_frame(f)) raise(ErrorCode::NotDevFrame, "enumerated frame violates the Dev(N) laws");
      if (auto hit = frame_predicate(sc.kind, f)) return Found{i, std::move(*hit)};
      return std::nullopt;
    });
    const auto stop = found ? found->index + 1 : space.count();
    for (std::uint64_t i = 0; i < stop; ++i) {
      if (space.relations(i)) ++result.examined;
    }
    if (found) {
      result.sat = true;
      result.frame = space.frame(*space.relations(found->index));
      result.annotations = found->hit.annotations;
      return result;
    }
  }
  return result;
}

// ------------------------------------------------ social-choice predicates

struct MicroInstance {
  std::uint32_t base;   // 𝓜 as a bitmask over the listed reports
  std::uint32_t truth;  // 𝓓 ⊆ 𝓜
};

bool same_event(const WitnessRecord& w, const BoundaryRecord& b) {
  return w.truth == b.truth && w.coalition == b.coalition && w.deviated == b.deviated;
}

SearchResult search_micro(const Scenario& sc) {
  if (sc.agents < 1 || sc.agents > 3) raise(ErrorCode::BudgetExceeded, "micro-instances use 1 to 3 agents");
  const int n = sc.agents;
  const AlternativeSet alts({"a", "b"});
  const ProfileSpace universe(DomainSpec::universal(), n, alts);
  std::vector<Profile> reports;
  universe.for_each([&](const Profile& p, std::uint64_t) {
    reports.push_back(p);
    return true;
  });
  const auto p = static_cast<std::uint32_t>(reports.size());
  std::vector<MicroInstance> instances;
  for (std::uint32_t base = 1; base < (1u << p); ++base) {
    for (std::uint32_t truth = 1; truth < (1u << p); ++truth) {
      if ((truth & ~base) == 0) instances.push_back({base, truth});
    }
  }
  const std::uint64_t tables = std::uint64_t{1} << p;
  const auto count = instances.size() * tables;
  if (count > kMaxCandidates) raise(ErrorCode::BudgetExceeded, "too many micro-instances");

  auto pick = [&](std::uint32_t mask) {
    std::vector<Profile> out;
    for (std::uint32_t k = 0; k < p; ++k) {
      if (mask >> k & 1u) out.push_back(reports[k]);
    }
    return out;
  };
  const ProfileSpace all_reports(DomainSpec::list(reports), n, alts);

  const auto found = parallel::first_hit<Hit>(count, sc.jobs, [&](std::uint64_t index) -> std::optional<Hit> {
    const auto& inst = instances[index / tables];
    const auto values = static_cast<std::uint32_t>(index % tables);
    std::map<Profile, Alternative> base_rows, boundary_rows;
    for (std::uint32_t k = 0; k < p; ++k) {
      const Alternative v = static_cast<Alternative>(values >> (p - 1 - k) & 1u);
      (inst.base >> k & 1u ? base_rows : boundary_rows)[reports[k]] = v;
    }
    const Rule f = Rule::table(n, alts, base_rows);
    const Rule g = f.with_overlay(boundary_rows);
    const ProfileSpace base(DomainSpec::list(pick(inst.base)), n, alts);
    const ProfileSpace truth(DomainSpec::list(pick(inst.truth)), n, alts);
    const auto old_witnesses = enumerate_witnesses(f, truth, base);
    const auto new_witnesses = enumerate_witnesses(g, truth, all_reports);
    const auto boundary = boundary_audit(g, truth, base);

    auto notes = [&](const WitnessRecord* w) {
      Hit hit;
      hit.annotations.push_back("base: " + base.spec().describe(alts));
      hit.annotations.push_back("truth: " + truth.spec().describe(alts));
      for (const auto& [q, v] : base_rows) hit.annotations.push_back("row: " + profile_text(q, alts) + " -> " + alts.name(v));
      for (const auto& [q, v] : boundary_rows) {
        hit.annotations.push_back("boundary-row: " + profile_text(q, alts) + " -> " + alts.name(v));
      }
      if (w) hit.annotations.push_back("witness: " + witness_fields(*w, alts));
      return hit;
    };

    if (sc.kind == ScenarioKind::BoundaryRowCreatesWitness) {
      if (!old_witnesses.empty() || new_witnesses.empty()) return std::nullopt;
      return notes(&new_witnesses.front());
    }
    // Every witness of g is a witness of f or a boundary record, and every
    // boundary record is a witness of g.
    for (const auto& w : new_witnesses) {
      const bool old = std::find(old_witnesses.begin(), old_witnesses.end(), w) != old_witnesses.end();
      bool listed = false;
      for (const auto& b : boundary) listed = listed || same_event(w, b);
      if (!old && !listed) return notes(&w);
      if (listed && base.contains(w.deviated)) return notes(&w);
    }
    for (const auto& b : boundary) {
      bool matched = false;
      for (const auto& w : new_witnesses) matched = matched || same_event(w, b);
      if (!matched) return notes(nullptr);
    }
    return std::nullopt;
  });

  SearchResult result;
  result.examined = count;
  if (found) {
    result.sat = true;
    std::vector<std::string> names = state_names(reports.size(), 'q');
    LabelledFrame frame(n, names);
    for (Coalition c : all_labels(n)) {
      if (c.empty()) continue;
      frame.mark_declared(c);
      for (std::size_t s = 0; s < reports.size(); ++s) {
        for (std::size_t t = 0; t < reports.size(); ++t) {
          if (agrees_outside(reports[s], reports[t], c)) frame.add_pair(c, s, t);
        }
      }
    }
    result.frame = std::move(frame);
    for (std::size_t s = 0; s < reports.size(); ++s) {
      result.annotations.push_back(names[s] + ": " + profile_text(reports[s], alts));
    }
    for (auto& a : found->annotations) result.annotations.push_back(std::move(a));
  }
  return result;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) { return info(kind).name; }

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  raise(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

const std::vector<ScenarioKind>& all_scenarios() {
  static const std::vector<ScenarioKind> kinds = [] {
    std::vector<ScenarioKind> out;
    for (const auto& k : kKinds) out.push_back(k.kind);
    return out;
  }();
  return kinds;
}

bool scenario_expects_sat(ScenarioKind kind) { return info(kind).expects_sat; }

Scenario Scenario::defaults(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  s.max_states = info(kind).states;
  s.exact = info(kind).exact;
  return s;
}

std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  if (k <= 0) return {{}};
  std::vector<int> rgs(static_cast<std::size_t>(k), 0);
  while (true) {
    out.push_back(rgs);
    // Next restricted growth string: bump the last position that may grow.
    int i = k - 1;
    while (i > 0) {
      int prefix_max = 0;
      for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[static_cast<std::size_t>(j)]);
      if (rgs[static_cast<std::size_t>(i)] <= prefix_max) break;
      --i;
    }
    if (i == 0) return out;
    ++rgs[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) rgs[static_cast<std::size_t>(j)] = 0;
  }
}

std::vector<LabelledFrame> enumerate_dev_frames(int k, int agents) {
  if (k < 1 || k > kMaxSearchStates) raise(ErrorCode::BudgetExceeded, "state count out of the search range");
  if (agents < 1 || agents > kMaxSearchAgents) raise(ErrorCode::BudgetExceeded, "agent count out of the search range");
  const FrameSpace space(k, agents);
  std::vector<LabelledFrame> out;
  for (std::uint64_t i = 0; i < space.count(); ++i) {
    if (auto rel = space.relations(i)) out.push_back(space.frame(*rel));
  }
  return out;
}

SearchResult run_scenario(const Scenario& scenario) {
  if (is_social(scenario.kind)) return search_micro(scenario);
  if (scenario.max_states < 1 || scenario.max_states > kMaxSearchStates) {
    raise(ErrorCode::BudgetExceeded, "state bound must be between 1 and " + std::to_string(kMaxSearchStates));
  }
  if (scenario.agents < 1 || scenario.agents > kMaxSearchAgents) {
    raise(ErrorCode::BudgetExceeded, "agent bound must be between 1 and " + std::to_string(kMaxSearchAgents));
  }
  return search_frames(scenario);
}

std::string print_search_result(const Scenario& scenario, const SearchResult& result) {
  std::ostringstream out;
  out << (result.sat ? "SAT" : "UNSAT") << ' ' << to_string(scenario.kind) << '\n';
  if (result.frame) out << print_frame(*result.frame);
  if (is_social(scenario.kind)) {
    out << "# bounds: agents " << scenario.agents << ", alternatives 2\n";
  } else {
    out << "# bounds: " << (scenario.exact ? "exactly " : "up to ") << scenario.max_states << " states, agents "
        << scenario.agents << '\n';
  }
  out << "# examined: " << result.examined << '\n';
  for (const auto& a : result.annotations) out << "# " << a << '\n';
  return out.str();
}

}  // namespace devaudit
