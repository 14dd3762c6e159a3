#include <sstream>

#include "devaudit/error.hpp"
#include "devaudit/pattern_search.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace devaudit;

namespace {

oracle::Rels to_rels(const LabelledFrame& f) {
  oracle::Rels rels;
  const int k = static_cast<int>(f.size());
  for (unsigned c = 0; c < (1u << f.agents()); ++c) {
    auto& r = rels[c];
    for (int s = 0; s < k; ++s) {
      for (int t = 0; t < k; ++t) {
        if (f.related(Coalition::from_mask(c), static_cast<std::size_t>(s), static_cast<std::size_t>(t))) r.insert({s, t});
      }
    }
  }
  return rels;
}

std::vector<int> annotated_survivors(const LabelledFrame& f, const SearchResult& r) {
  for (const auto& a : r.annotations) {
    if (a.rfind("survivors: ", 0) != 0) continue;
    std::istringstream in(a.substr(11));
    std::vector<int> out;
    std::string name;
    while (in >> name) out.push_back(static_cast<int>(f.index_of(name)));
    return out;
  }
  return {};
}

/// Two-agent Dev frames on k states counted by brute force over pairs of
/// equivalences, with the grand relation forced by composition.
std::size_t brute_force_dev_count(int k) {
  std::vector<oracle::Rel> equivalences;
  // every relation that is an equivalence, found by scanning all block labellings
  std::set<oracle::Rel> seen;
  std::vector<int> block(static_cast<std::size_t>(k), 0);
  while (true) {
    seen.insert(oracle::partition_relation(block));
    int i = k - 1;
    while (i >= 0 && block[static_cast<std::size_t>(i)] == k - 1) block[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++block[static_cast<std::size_t>(i)];
  }
  std::size_t count = 0;
  for (const auto& a : seen) {
    for (const auto& b : seen) {
      oracle::Rels rels{{0, oracle::identity(k)}, {1, a}, {2, b}, {3, oracle::compose(a, b)}};
      if (oracle::dev_laws(k, 2, rels)) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("set partitions follow the Bell numbers") {
  const std::vector<std::size_t> bell{1, 1, 2, 5, 15, 52, 203};
  for (int k = 1; k <= 6; ++k) CHECK(set_partitions(k).size() == bell[static_cast<std::size_t>(k)]);
  CHECK(set_partitions(3).front() == std::vector<int>{0, 0, 0});
  CHECK(set_partitions(3).back() == std::vector<int>{0, 1, 2});
}

TEST_CASE("enumerated Dev frames match brute force") {
  for (int k = 1; k <= 4; ++k) {
    const auto frames = enumerate_dev_frames(k, 2);
    CHECK(frames.size() == brute_force_dev_count(k));
    std::set<oracle::Rels> distinct;
    for (const auto& f : frames) {
      const auto rels = to_rels(f);
      CHECK(oracle::dev_laws(k, 2, rels));
      distinct.insert(rels);
    }
    CHECK(distinct.size() == frames.size());
  }
}

TEST_CASE("scenario names round trip") {
  for (auto kind : all_scenarios()) CHECK(parse_scenario_kind(to_string(kind)) == kind);
  CHECK(all_scenarios().size() == 11);
  CHECK_THROWS_AS(parse_scenario_kind("no-such-scenario"), Error);
}

TEST_CASE("non-product component has two states") {
  const auto r = run_scenario(Scenario::defaults(ScenarioKind::NonProductComponent));
  REQUIRE(r.sat);
  REQUIRE(r.frame.has_value());
  CHECK(r.frame->size() == 2);
  const auto comps = grand_components(*r.frame);
  REQUIRE(comps.size() == 1);
  CHECK_FALSE(coordinate_separation_check(*r.frame, comps[0]).separated);
}

TEST_CASE("unsafe public deletion breaks the laws on its survivors") {
  const auto r = run_scenario(Scenario::defaults(ScenarioKind::UnsafePublicDeletion));
  REQUIRE(r.sat);
  const auto rels = to_rels(*r.frame);
  const auto keep = annotated_survivors(*r.frame, r);
  REQUIRE_FALSE(keep.empty());
  CHECK(oracle::dev_laws(static_cast<int>(r.frame->size()), r.frame->agents(), rels));
  CHECK_FALSE(oracle::factor_closed(r.frame->agents(), rels, keep));
  CHECK_FALSE(oracle::dev_laws(static_cast<int>(keep.size()), r.frame->agents(), oracle::restrict(rels, keep)));
}

TEST_CASE("safe line deletion keeps the laws") {
  const auto r = run_scenario(Scenario::defaults(ScenarioKind::SafeLineDeletion));
  REQUIRE(r.sat);
  const auto rels = to_rels(*r.frame);
  const auto keep = annotated_survivors(*r.frame, r);
  REQUIRE_FALSE(keep.empty());
  CHECK(keep.size() < r.frame->size());
  CHECK(oracle::dev_laws(static_cast<int>(keep.size()), r.frame->agents(), oracle::restrict(rels, keep)));
}

TEST_CASE("fast checks come out UNSAT") {
  for (auto kind : {ScenarioKind::DevImpliesMixing, ScenarioKind::MissingCornerInDev, ScenarioKind::NewWitnessOldOrBoundary}) {
    const auto r = run_scenario(Scenario::defaults(kind));
    CHECK_MESSAGE(!r.sat, to_string(kind));
    CHECK(r.examined > 0);
    CHECK_FALSE(scenario_expects_sat(kind));
  }
}

TEST_CASE("search bounds are enforced") {
  auto sc = Scenario::defaults(ScenarioKind::DevImpliesMixing);
  sc.max_states = 13;
  CHECK_THROWS_AS(run_scenario(sc), Error);
  sc.max_states = 3;
  sc.agents = 5;
  CHECK_THROWS_AS(run_scenario(sc), Error);
}

TEST_CASE("printed result lists bounds and annotations") {
  const auto sc = Scenario::defaults(ScenarioKind::RepairOneCorner);
  const auto r = run_scenario(sc);
  REQUIRE(r.sat);
  const auto text = print_search_result(sc, r);
  CHECK(text.rfind("SAT repair-one-corner\n", 0) == 0);
  CHECK(text.find("# bounds: exactly 4 states") != std::string::npos);
  CHECK(text.find("# added-corner: ") != std::string::npos);
}
