#include <random>

#include "devaudit/error.hpp"
#include "devaudit/frame.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace devaudit;

namespace {

std::vector<StateIndex> members(unsigned mask, int k) {
  std::vector<StateIndex> out;
  for (int s = 0; s < k; ++s) {
    if (mask >> s & 1u) out.push_back(static_cast<StateIndex>(s));
  }
  return out;
}

std::vector<int> as_int(const std::vector<StateIndex>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("square frame parses and satisfies the laws") {
  const auto frame = parse_frame(read_data("frames/square.frame"));
  CHECK(frame.size() == 4);
  CHECK(frame.agents() == 2);
  CHECK(check_dev_laws(frame).passed);
  CHECK(frame.related(Coalition::of({1}), frame.index_of("s00"), frame.index_of("s10")));
  CHECK_FALSE(frame.related(Coalition::of({1}), frame.index_of("s00"), frame.index_of("s01")));
  CHECK(parse_frame(print_frame(frame)) == frame);
}

TEST_CASE("deleting a corner breaks the reverse composition law") {
  const auto frame = parse_frame(read_data("frames/square_minus_corner.frame"));
  const auto report = check_dev_laws(frame);
  REQUIRE_FALSE(report.passed);
  bool reverse = false;
  for (const auto& v : report.violations) reverse = reverse || v.law == DevLaw::D4Reverse;
  CHECK(reverse);
}

TEST_CASE("non-product component fails coordinate separation") {
  const auto frame = parse_frame(read_data("frames/nonproduct.frame"));
  REQUIRE(check_dev_laws(frame).passed);
  const auto comps = grand_components(frame);
  REQUIRE(comps.size() == 1);
  const auto verdict = coordinate_separation_check(frame, comps[0]);
  CHECK_FALSE(verdict.separated);
  CHECK_THROWS_AS(product_representation(frame, comps[0]), Error);
}

TEST_CASE("square has a product representation with 2 x 2 coordinates") {
  const auto frame = parse_frame(read_data("frames/square.frame"));
  const auto comps = grand_components(frame);
  REQUIRE(comps.size() == 1);
  const auto rep = product_representation(frame, comps[0]);
  REQUIRE(rep.coordinate_sets.size() == 2);
  CHECK(rep.coordinate_sets[0].size() == 2);
  CHECK(rep.coordinate_sets[1].size() == 2);
  std::set<std::vector<std::size_t>> distinct(rep.embedding.begin(), rep.embedding.end());
  CHECK(distinct.size() == 4);
}

TEST_CASE("missing midpoint is reported for diagonal survivors") {
  const auto frame = parse_frame(read_data("frames/square.frame"));
  const std::vector<StateIndex> keep{frame.index_of("s01"), frame.index_of("s10")};
  const auto verdict = factor_closure_check(frame, keep);
  REQUIRE_FALSE(verdict.closed);
  CHECK(verdict.missing->source == frame.index_of("s01"));
  CHECK(verdict.missing->target == frame.index_of("s10"));
}

TEST_CASE("rectangular mixing finds the corner") {
  const auto frame = parse_frame(read_data("frames/square.frame"));
  const auto u = rectangular_mixing_witness(frame, frame.index_of("s00"), frame.index_of("s11"), Coalition::of({1}));
  // u E_{1} s00 and u E_{2} s11
  CHECK(frame.related(Coalition::of({1}), u, frame.index_of("s00")));
  CHECK(frame.related(Coalition::of({2}), u, frame.index_of("s11")));
}

TEST_CASE("frame syntax errors carry line numbers") {
  try {
    parse_frame("agents: 2\nstates: a b\nrel {1}: (a,c)\n");
    FAIL("expected an error");
  } catch (const SyntaxError& e) {
    CHECK(e.is_line());
    CHECK(e.position() == 3);
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::UnknownState || e.code() == ErrorCode::MalformedFrame));
  }
  CHECK_THROWS(parse_frame("states: a b\n"));
}

TEST_CASE("law checker agrees with the literal oracle on random frames") {
  std::mt19937 rng(7);
  int mismatches = 0;
  for (int round = 0; round < 300; ++round) {
    const int n = 1 + round % 2;
    int k = 0;
    auto rels = oracle::random_grid_frame(rng, n, k);
    // perturb about half the instances by toggling one off-diagonal pair
    if (round % 2 == 1 && k > 1) {
      const unsigned c = std::uniform_int_distribution<unsigned>(1, (1u << n) - 1)(rng);
      const int s = std::uniform_int_distribution<int>(0, k - 1)(rng);
      int t = std::uniform_int_distribution<int>(0, k - 1)(rng);
      if (t == s) t = (s + 1) % k;
      auto& r = rels[c];
      if (r.count({s, t})) r.erase({s, t});
      else r.insert({s, t});
    }
    const bool expected = oracle::dev_laws(k, n, rels);
    const bool got = check_dev_laws(oracle::to_frame(k, n, rels)).passed;
    if (expected != got) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("factor closure matches the oracle on random grid frames") {
  std::mt19937 rng(11);
  for (int round = 0; round < 60; ++round) {
    int k = 0;
    const auto rels = oracle::random_grid_frame(rng, 2, k);
    if (k > 10) continue;
    const auto frame = oracle::to_frame(k, 2, rels);
    for (unsigned mask = 1; mask < (1u << k); mask += 1 + (mask % 3)) {
      const auto keep = members(mask, k);
      const bool expected = oracle::factor_closed(2, rels, as_int(keep));
      CHECK(factor_closure_check(frame, keep).closed == expected);
      CHECK(expected == oracle::dev_laws(static_cast<int>(keep.size()), 2, oracle::restrict(rels, as_int(keep))));
    }
  }
}
