#include <random>

#include "devaudit/certificate.hpp"
#include "devaudit/error.hpp"
#include "devaudit/model.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace devaudit;

namespace {

void subformulas(const Formula& f, std::vector<Formula>& out) {
  if (std::find(out.begin(), out.end(), f) != out.end()) return;
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Diamond:
    case FormulaKind::Box: subformulas(f.operand(), out); break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      subformulas(f.lhs(), out);
      subformulas(f.rhs(), out);
      break;
    default: break;
  }
  out.push_back(f);
}

std::string label_text(unsigned mask) { return Coalition::from_mask(mask).to_string(); }

/// Writes a certificate whose types are the true truth sets on a grid frame.
std::string honest_certificate(const oracle::Rels& rels, int k, int n, const std::vector<std::set<std::string>>& val,
                               const Formula& phi, int root) {
  std::vector<Formula> closure;
  subformulas(phi, closure);
  std::string out = "states:";
  for (int s = 0; s < k; ++s) out += " s" + std::to_string(s);
  out += "\nroot: s" + std::to_string(root) + "\nlabels:";
  for (unsigned c = 0; c < (1u << n); ++c) out += " " + label_text(c);
  out += "\nformula: " + phi.text() + "\nclosure: ";
  for (std::size_t i = 0; i < closure.size(); ++i) out += (i ? " ; " : "") + closure[i].text();
  out += "\n";
  for (int s = 0; s < k; ++s) {
    std::string row;
    for (const auto& f : closure) {
      if (oracle::holds(rels, val, f, s)) row += (row.empty() ? "" : ", ") + f.text();
    }
    out += "types: s" + std::to_string(s) + " = " + row + "\n";
  }
  for (const auto& [c, r] : rels) {
    out += "relations " + label_text(c) + ":";
    for (auto [s, t] : r) out += " (s" + std::to_string(s) + ",s" + std::to_string(t) + ")";
    out += "\n";
  }
  for (const auto& f : closure) {
    if (f.kind() != FormulaKind::Diamond) continue;
    for (int s = 0; s < k; ++s) {
      if (!oracle::holds(rels, val, f, s)) continue;
      for (auto [a, b] : rels.at(f.coalition().mask())) {
        if (a == s && oracle::holds(rels, val, f.operand(), b)) {
          out += "diamonds: s" + std::to_string(s) + " " + f.text() + " -> s" + std::to_string(b) + "\n";
          break;
        }
      }
    }
  }
  return out;
}

std::string random_pure_formula(std::mt19937& rng, int n, int depth) {
  const int pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 1 : 6)(rng);
  const auto coal = [&] { return Coalition::from_mask(std::uniform_int_distribution<unsigned>(0, (1u << n) - 1)(rng)).to_string(); };
  switch (pick) {
    case 0: return "p";
    case 1: return "q";
    case 2: return "~" + random_pure_formula(rng, n, depth - 1);
    case 3: return "(" + random_pure_formula(rng, n, depth - 1) + " & " + random_pure_formula(rng, n, depth - 1) + ")";
    case 4: return "(" + random_pure_formula(rng, n, depth - 1) + " -> " + random_pure_formula(rng, n, depth - 1) + ")";
    case 5: return "<" + coal() + ">" + random_pure_formula(rng, n, depth - 1);
    default: return "[" + coal() + "]" + random_pure_formula(rng, n, depth - 1);
  }
}

/// Accepted certificates must agree with the model checker on their tables.
bool sound(const Certificate& cert) {
  const auto model = certificate_model(cert);
  for (std::size_t k = 0; k < cert.closure.size(); ++k) {
    const auto truth = evaluate(model, cert.closure[k]);
    for (std::size_t t = 0; t < cert.states.size(); ++t) {
      if (truth.test(t) != cert.types[t][k]) return false;
    }
  }
  return evaluate(model, cert.formula).test(cert.root);
}

}  // namespace

TEST_CASE("stored certificates") {
  const auto good = parse_certificate(read_data("certs/good.cert"));
  const auto ok = verify_certificate(good);
  CHECK(ok.accepted);
  CHECK(sound(good));

  const auto diamond = verify_certificate(parse_certificate(read_data("certs/bad_diamond.cert")));
  REQUIRE_FALSE(diamond.accepted);
  CHECK(diamond.failure->row_kind == "diamond-row");

  const auto uni = verify_certificate(parse_certificate(read_data("certs/bad_union.cert")));
  REQUIRE_FALSE(uni.accepted);
  CHECK(uni.failure->row_kind == "union-row");
}

TEST_CASE("certificate parse errors") {
  const std::string base = "states: s0\nroot: s0\nlabels: {} {1}\nformula: p\nclosure: p\n";
  CHECK_NOTHROW(parse_certificate(base));
  try {
    parse_certificate("states: s0\nlabels: {} {1}\nformula: p\nclosure: p\n");
    FAIL("missing root");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 0);
  }
  try {
    parse_certificate(base + "bogus: 1\n");
    FAIL("unknown key");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 6);
  }
  CHECK_THROWS_AS(parse_certificate("states: s0\nroot: s0\nlabels: {} {2}\nformula: p\nclosure: p\n"), SyntaxError);
  for (const std::string tail : {"types: s9 = p\n", "types: s0 = q\n", "diamonds: s0 <{1}>p -> s0\n"}) {
    try {
      parse_certificate(base + tail);
      FAIL("expected DanglingReference");
    } catch (const SyntaxError&) {
      FAIL("expected DanglingReference, got a syntax error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DanglingReference);
    }
  }
}

TEST_CASE("missing closure operands are rejected") {
  const auto cert = parse_certificate("states: s0\nroot: s0\nlabels: {} {1}\nformula: <{1}>p\nclosure: <{1}>p\n"
                                      "types: s0 = <{1}>p\n");
  const auto result = verify_certificate(cert);
  REQUIRE_FALSE(result.accepted);
  CHECK(result.failure->row_kind == "diamond-row");
}

TEST_CASE("honest random certificates are accepted and sound") {
  std::mt19937 rng(31);
  int accepted = 0, rejected_after_flip = 0, flips = 0;
  for (int round = 0; round < 120; ++round) {
    const int n = 1 + round % 2;
    int k = 0;
    const auto rels = oracle::random_grid_frame(rng, n, k);
    std::vector<std::set<std::string>> val(static_cast<std::size_t>(k));
    for (auto& v : val) {
      if (rng() % 2) v.insert("p");
      if (rng() % 2) v.insert("q");
    }
    auto phi = parse_formula(random_pure_formula(rng, n, 3), {n, {}});
    // pick a root where phi holds, if any
    int root = -1;
    for (int s = 0; s < k && root < 0; ++s) {
      if (oracle::holds(rels, val, phi, s)) root = s;
    }
    if (root < 0) {
      phi = Formula::negation(phi);
      root = 0;
    }
    const auto text = honest_certificate(rels, k, n, val, phi, root);
    const auto cert = parse_certificate(text);
    const auto result = verify_certificate(cert);
    CHECK_MESSAGE(result.accepted, text);
    if (!result.accepted) continue;
    ++accepted;
    CHECK(sound(cert));

    // flipping a non-letter type bit must be caught
    auto tampered = cert;
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t t = 0; t < cert.states.size(); ++t) {
      for (std::size_t i = 0; i < cert.closure.size(); ++i) {
        if (!cert.closure[i].is_atom()) cells.emplace_back(t, i);
      }
    }
    if (cells.empty()) continue;
    const auto [t, i] = cells[rng() % cells.size()];
    tampered.types[t][i] = !tampered.types[t][i];
    ++flips;
    if (!verify_certificate(tampered).accepted) ++rejected_after_flip;
  }
  CHECK(accepted == 120);
  CHECK(rejected_after_flip == flips);
}
