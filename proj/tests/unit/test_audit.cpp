#include <random>

#include "devaudit/audit.hpp"
#include "devaudit/error.hpp"
#include "devaudit/manipulation.hpp"
#include "devaudit/witness.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace devaudit;

namespace {

AlternativeSet letters(int m) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return AlternativeSet(names);
}

struct Median5 {
  Rule base = parse_rule(read_data("rules/median5.rule"));
  Rule extended = parse_rule(read_data("rules/median5_extended.rule"));
  ProfileSpace sp{DomainSpec::single_peaked(base.order()), 5, base.alternatives()};
  WitnessRecord w = parse_witness(read_data("witness/median5.witness"), base.alternatives(), 5);
  std::vector<Profile> survivors = parse_profile_list(read_data("witness/median5_survivors.txt"), base.alternatives(), 5);
};

}  // namespace

TEST_CASE("stored median witness replays three ways") {
  const Median5 m;
  CHECK(replay_witness(m.w, {m.base, m.sp, m.sp, std::nullopt}).label() == "edge-deleted");

  const auto boundary = replay_witness(m.w, {m.extended, m.sp, m.sp, std::nullopt});
  CHECK(boundary.status == ReplayStatus::SameManipulationWitness);
  CHECK(boundary.boundary);
  CHECK(boundary.label() == "boundary-witness");

  const auto unsafe = replay_witness(m.w, {m.extended, m.sp, m.sp, m.survivors});
  CHECK(unsafe.label() == "unsafe-update");
  REQUIRE(unsafe.gap.has_value());
  CHECK(unsafe.gap->target == m.w.deviated);
}

TEST_CASE("replay reports each failing step") {
  const auto rule = parse_rule(read_data("rules/plurality.rule"));
  const auto& alts = rule.alternatives();
  const ProfileSpace all(DomainSpec::universal(), 3, alts);
  const AuditEnvironment env{rule, all, all, std::nullopt};
  const auto found = check_strategy_proofness(rule, all, all);
  REQUIRE(found.has_value());
  CHECK(replay_witness(*found, env).label() == "same-manipulation-witness");

  auto wrong_y = *found;
  wrong_y.y = wrong_y.x;
  CHECK(replay_witness(wrong_y, env).status == ReplayStatus::RuleValueChanged);

  auto outside = *found;
  const auto other = outside.coalition.contains(1) ? 2 : 1;
  auto q = outside.deviated;
  q[static_cast<std::size_t>(other - 1)] = outside.current[static_cast<std::size_t>(other - 1)] == LinearOrder::identity(3)
                                               ? LinearOrder::from_ranking({2, 1, 0})
                                               : LinearOrder::identity(3);
  outside.deviated = q;
  outside.y = rule.apply(q);
  CHECK(replay_witness(outside, env).status == ReplayStatus::SuccessorNotAdmitted);

  // swap the deviator's true preference so the deviation no longer helps
  auto spoiled = *found;
  const auto i = static_cast<std::size_t>(spoiled.coalition.members().front() - 1);
  std::vector<Alternative> ranking{spoiled.x, spoiled.y};
  for (Alternative z = 0; z < 3; ++z) {
    if (z != spoiled.x && z != spoiled.y) ranking.push_back(z);
  }
  spoiled.truth[i] = LinearOrder::from_ranking(ranking);
  CHECK(replay_witness(spoiled, env).status == ReplayStatus::WelfareComparisonChanged);

  const ProfileSpace sp(DomainSpec::single_peaked(LinearOrder::identity(3)), 3, alts);
  auto off = *found;
  off.truth[0] = LinearOrder::from_ranking({0, 2, 1});
  CHECK(replay_witness(off, {rule, sp, all, std::nullopt}).status == ReplayStatus::WelfareOutsideDomain);

  auto bad = *found;
  bad.coalition = Coalition{};
  CHECK_THROWS_AS(replay_witness(bad, env), Error);
}

TEST_CASE("fibre gap on the median survivors") {
  const Median5 m;
  const auto gap = fibre_factor_gap(m.survivors, 5);
  REQUIRE(gap.has_value());
  CHECK(gap->first == Coalition::of({5}));
  CHECK(gap->second == Coalition::of({4}));
  CHECK(gap->target == m.w.deviated);
  auto closed = m.survivors;
  auto corner = m.w.current;
  corner[3] = m.survivors[1][3];
  corner[4] = m.w.deviated[4];
  closed.push_back(corner);
  CHECK_FALSE(fibre_factor_gap(closed, 5).has_value());

  const auto unsafe = update_safety_audit(m.extended, m.w.truth, m.sp, m.survivors);
  CHECK_FALSE(unsafe.safe);
}

TEST_CASE("boundary audit on the median extension") {
  const Median5 m;
  const auto records = boundary_audit(m.extended, m.sp, m.sp);
  CHECK_FALSE(records.empty());
  bool stored = false;
  for (const auto& r : records) {
    CHECK(r.g_of_deviated == 2);
    stored = stored || (r.truth == m.w.truth && r.coalition == m.w.coalition && r.deviated == m.w.deviated);
  }
  CHECK(stored);
  CHECK(boundary_audit(m.base, m.sp, m.sp).empty());
}

TEST_CASE("boundary audit equals full enumeration on random micro-instances") {
  std::mt19937 rng(29);
  int instances = 0;
  int nonempty = 0;
  while (instances < 250) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % 2);
    const auto alts = letters(m);
    auto universe = oracle::product(oracle::permutations(m), n);
    std::shuffle(universe.begin(), universe.end(), rng);
    const std::size_t base_n = 1 + rng() % std::min<std::size_t>(universe.size() - 1, 10);
    const std::size_t extra_n = 1 + rng() % std::min<std::size_t>(universe.size() - base_n, 6);
    const std::vector<oracle::Prof> base(universe.begin(), universe.begin() + static_cast<long>(base_n));
    const std::vector<oracle::Prof> extra(universe.begin() + static_cast<long>(base_n),
                                          universe.begin() + static_cast<long>(base_n + extra_n));
    std::vector<oracle::Prof> truth;
    for (const auto& p : base) {
      if (rng() % 2) truth.push_back(p);
    }
    if (truth.empty()) truth.push_back(base.front());

    std::map<oracle::Prof, int> values;
    for (const auto& p : base) values[p] = static_cast<int>(rng() % static_cast<unsigned>(m));
    for (const auto& p : extra) values[p] = static_cast<int>(rng() % static_cast<unsigned>(m));
    const auto value = [&](const oracle::Prof& p) { return values.at(p); };

    auto extended_reports = base;
    extended_reports.insert(extended_reports.end(), extra.begin(), extra.end());
    const auto after = oracle::manipulations(truth, extended_reports, value, n);
    const auto before = oracle::manipulations(truth, base, value, n);
    std::set<oracle::Event> expected;
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::inserter(expected, expected.begin()));

    std::map<Profile, Alternative> table, overlay;
    std::vector<Profile> base_rows, truth_rows;
    for (const auto& p : base) {
      table[oracle::to_profile(p)] = values[p];
      base_rows.push_back(oracle::to_profile(p));
    }
    for (const auto& p : extra) overlay[oracle::to_profile(p)] = values[p];
    for (const auto& p : truth) truth_rows.push_back(oracle::to_profile(p));
    const auto g = Rule::table(n, alts, table).with_overlay(overlay);
    const auto records = boundary_audit(g, ProfileSpace(DomainSpec::list(truth_rows), n, alts),
                                        ProfileSpace(DomainSpec::list(base_rows), n, alts));
    std::set<oracle::Event> got;
    for (const auto& r : records) {
      got.insert({oracle::from_profile(r.truth), r.coalition.mask(), oracle::from_profile(r.deviated)});
    }
    CHECK(got.size() == records.size());
    CHECK(got == expected);
    nonempty += expected.empty() ? 0 : 1;
    ++instances;
  }
  CHECK(nonempty > 20);
}

TEST_CASE("boundary audit rejects overlays that change the certified rule") {
  const auto alts = letters(2);
  const auto p = oracle::to_profile({{0, 1}});
  const auto q = oracle::to_profile({{1, 0}});
  const auto f = Rule::table(1, alts, {{p, 0}, {q, 1}});
  try {
    const ProfileSpace base(DomainSpec::list({p}), 1, alts);
    CHECK(boundary_audit(Rule::table(1, alts, {{p, 1}}).with_overlay({{q, 0}}), base, base).size() == 1);
  } catch (const Error&) {
    FAIL("a boundary row outside the base must be accepted");
  }
  CHECK_THROWS_AS(f.with_overlay({{q, 0}}), Error);
}

TEST_CASE("witness block round trip") {
  const Median5 m;
  const auto text = print_witness(m.w, m.base.alternatives());
  CHECK(parse_witness(text, m.base.alternatives(), 5) == m.w);
  CHECK_THROWS_AS(make_witness(m.w.truth, m.w.current, Coalition{}, m.w.deviated, 1, 2), Error);
}
