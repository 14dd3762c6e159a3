#include <random>

#include "devaudit/error.hpp"
#include "devaudit/formula.hpp"
#include "devaudit/model.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace devaudit;

namespace {

std::string random_coalition(std::mt19937& rng, int n) {
  const unsigned mask = std::uniform_int_distribution<unsigned>(0, (1u << n) - 1)(rng);
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (!(mask >> i & 1u)) continue;
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

std::string random_formula(std::mt19937& rng, int n, int depth) {
  const int pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 1 : 7)(rng);
  switch (pick) {
    case 0: return "p";
    case 1: return "q";
    case 2: return "~" + random_formula(rng, n, depth - 1);
    case 3: return "(" + random_formula(rng, n, depth - 1) + " & " + random_formula(rng, n, depth - 1) + ")";
    case 4: return "(" + random_formula(rng, n, depth - 1) + " | " + random_formula(rng, n, depth - 1) + ")";
    case 5: return "(" + random_formula(rng, n, depth - 1) + " -> " + random_formula(rng, n, depth - 1) + ")";
    case 6: return "<" + random_coalition(rng, n) + ">" + random_formula(rng, n, depth - 1);
    default: return "[" + random_coalition(rng, n) + "]" + random_formula(rng, n, depth - 1);
  }
}

}  // namespace

TEST_CASE("formula parsing and canonical text") {
  const FormulaContext ctx{3, {"a", "b", "c"}};
  const auto f = parse_formula("(o_a & <{3}>(o_b & p_3_b_a))", ctx);
  CHECK(f.kind() == FormulaKind::And);
  CHECK(f.rhs().kind() == FormulaKind::Diamond);
  CHECK(f.rhs().coalition() == Coalition::of({3}));
  CHECK(parse_formula(f.text(), ctx) == f);
  const auto iff = parse_formula("(p <-> q)", {1, {}});
  CHECK(iff.kind() == FormulaKind::And);
  CHECK(parse_formula("  [ {1 , 2} ]  ~ p ", {2, {}}).text() == parse_formula("[{1,2}]~p", {2, {}}).text());
}

TEST_CASE("formula errors") {
  const FormulaContext ctx{2, {"a", "b"}};
  CHECK_THROWS_AS(parse_formula("(p &", ctx), SyntaxError);
  try {
    parse_formula("<{3}>p", ctx);
    FAIL("expected OutOfRangeAgent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRangeAgent);
  }
  try {
    parse_formula("o_z", ctx);
    FAIL("expected UnknownAlternative");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownAlternative);
  }
  try {
    parse_formula("(p q)", ctx);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK_FALSE(e.is_line());
    CHECK(e.position() == 3);
  }
}

TEST_CASE("square valuation model") {
  const auto frame = parse_frame(read_data("frames/square.frame"));
  const auto val = parse_valuation(read_data("frames/square.val"), frame);
  const ExplicitModel model(frame, val, {"p", "q"});
  const auto truth = evaluate(model, parse_formula("<{1}>q", {2, {}}));
  CHECK(truth.count() == 2);
  CHECK(truth.test(frame.index_of("s01")));
  CHECK(truth.test(frame.index_of("s11")));
  CHECK_THROWS_AS(evaluate(model, parse_formula("r", {2, {}})), Error);
}

TEST_CASE("evaluate and holds_at agree with the recursive oracle") {
  std::mt19937 rng(3);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    const int n = 1 + round % 3;
    int k = 0;
    const auto rels = oracle::random_grid_frame(rng, n, k);
    std::vector<std::set<std::string>> val(static_cast<std::size_t>(k));
    for (auto& v : val) {
      if (rng() % 2) v.insert("p");
      if (rng() % 2) v.insert("q");
    }
    const ExplicitModel model(oracle::to_frame(k, n, rels), val, {"p", "q"});
    const auto f = parse_formula(random_formula(rng, n, 4), {n, {}});
    const auto truth = evaluate(model, f);
    for (int s = 0; s < k; ++s) {
      const bool expected = oracle::holds(rels, val, f, s);
      CHECK(truth.test(static_cast<std::size_t>(s)) == expected);
      CHECK(holds_at(model, f, static_cast<std::size_t>(s)) == expected);
      ++checked;
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("composition collapses stacked diamonds on Dev frames") {
  std::mt19937 rng(5);
  for (int round = 0; round < 80; ++round) {
    const int n = 2 + round % 2;
    int k = 0;
    const auto rels = oracle::random_grid_frame(rng, n, k);
    std::vector<std::set<std::string>> val(static_cast<std::size_t>(k));
    for (auto& v : val) {
      if (rng() % 3 == 0) v.insert("p");
    }
    const ExplicitModel model(oracle::to_frame(k, n, rels), val, {"p", "q"});
    const auto c = random_coalition(rng, n), d = random_coalition(rng, n);
    const auto stacked = parse_formula("<" + c + "><" + d + ">p", {n, {}});
    const auto joined = Formula::diamond(stacked.coalition() | stacked.operand().coalition(),
                                         Formula::letter("p"));
    CHECK(evaluate(model, stacked) == evaluate(model, joined));
  }
}
