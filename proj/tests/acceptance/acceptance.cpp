// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "devaudit/audit.hpp"
#include "devaudit/biprofile.hpp"
#include "devaudit/certificate.hpp"
#include "devaudit/manipulation.hpp"
#include "devaudit/pattern_search.hpp"
#include "devaudit/witness.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace devaudit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

AlternativeSet letters(int m) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return AlternativeSet(names);
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome plurality_example() {
  const auto start = Clock::now();
  const auto rule = parse_rule(read_data("rules/plurality.rule"));
  const auto& alts = rule.alternatives();
  const ProfileSpace all(DomainSpec::universal(), 3, alts);
  const BiprofileModel model(rule, all, all);
  const auto r = parse_profile("a > b > c; b > a > c; c > b > a", alts, 3);
  const auto phi = parse_formula("(o_a & <{3}>(o_b & p_3_b_a))", {3, alts.names()});
  const bool holds = holds_at(model, phi, model.sincere_state(r));
  const auto w = check_strategy_proofness(rule, all, all);
  const bool replay = w && replay_witness(*w, {rule, all, all, std::nullopt}).label() == "same-manipulation-witness";
  const double t = seconds_since(start);
  std::ostringstream d;
  d << std::fixed << std::setprecision(3) << "formula " << (holds ? "true" : "false") << ", witness replay " << (replay ? "same" : "other") << ", " << t << " s";
  return {holds && replay && t < 1.0, d.str()};
}

Outcome median_certificate() {
  const auto start = Clock::now();
  const auto rule = parse_rule(read_data("rules/median5.rule"));
  const ProfileSpace sp(DomainSpec::single_peaked(rule.order()), 5, rule.alternatives());
  const auto w = check_strategy_proofness(rule, sp, sp);
  const double t = seconds_since(start);
  std::ostringstream d;
  d << std::fixed << std::setprecision(2) << sp.size() << " true profiles, " << (w ? "witness found" : "no witness") << ", " << t << " s";
  return {!w && sp.size() == 32768 && t < 30.0, d.str()};
}

Outcome single_peaked_count() {
  for (int m = 1; m <= 8; ++m) {
    oracle::Order axis(static_cast<std::size_t>(m));
    std::iota(axis.begin(), axis.end(), 0);
    const auto orders = generate_single_peaked(oracle::to_order(axis));
    std::set<LinearOrder> distinct(orders.begin(), orders.end());
    if (orders.size() != (std::size_t{1} << (m - 1)) || distinct.size() != orders.size()) {
      return {false, "m=" + std::to_string(m) + " gives " + std::to_string(orders.size())};
    }
    for (const auto& o : orders) {
      if (!oracle::single_peaked(oracle::from_order(o), axis)) return {false, "invalid order at m=" + std::to_string(m)};
    }
  }
  return {true, "m = 1..8"};
}

Outcome three_way_replay() {
  const auto base = parse_rule(read_data("rules/median5.rule"));
  const auto ext = parse_rule(read_data("rules/median5_extended.rule"));
  const ProfileSpace sp(DomainSpec::single_peaked(base.order()), 5, base.alternatives());
  const auto w = parse_witness(read_data("witness/median5.witness"), base.alternatives(), 5);
  const auto survivors = parse_profile_list(read_data("witness/median5_survivors.txt"), base.alternatives(), 5);
  const auto a = replay_witness(w, {base, sp, sp, std::nullopt}).label();
  const auto b = replay_witness(w, {ext, sp, sp, std::nullopt}).label();
  const auto c = replay_witness(w, {ext, sp, sp, survivors}).label();
  return {a == "edge-deleted" && b == "boundary-witness" && c == "unsafe-update", a + ", " + b + ", " + c};
}

Outcome boundary_completeness() {
  std::mt19937 rng(2024);
  int instances = 0, mismatches = 0, nonempty = 0;
  while (instances < 250) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % 2);
    const auto alts = letters(m);
    auto universe = oracle::product(oracle::permutations(m), n);
    std::shuffle(universe.begin(), universe.end(), rng);
    const std::size_t base_n = 1 + rng() % std::min<std::size_t>(universe.size() - 1, 12);
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
    for (const auto& p : universe) values[p] = static_cast<int>(rng() % static_cast<unsigned>(m));
    const auto value = [&](const oracle::Prof& p) { return values.at(p); };

    auto extended = base;
    extended.insert(extended.end(), extra.begin(), extra.end());
    const auto after = oracle::manipulations(truth, extended, value, n);
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
    const auto records = boundary_audit(Rule::table(n, alts, table).with_overlay(overlay),
                                        ProfileSpace(DomainSpec::list(truth_rows), n, alts),
                                        ProfileSpace(DomainSpec::list(base_rows), n, alts));
    std::set<oracle::Event> got;
    for (const auto& r : records) {
      got.insert({oracle::from_profile(r.truth), r.coalition.mask(), oracle::from_profile(r.deviated)});
    }
    if (got != expected || got.size() != records.size()) ++mismatches;
    nonempty += expected.empty() ? 0 : 1;
    ++instances;
  }
  return {mismatches == 0, std::to_string(instances) + " instances, " + std::to_string(nonempty) + " with new witnesses, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome factor_closure_characterization() {
  std::uint64_t pairs = 0, mismatches = 0, frames = 0;
  for (int k = 1; k <= 5; ++k) {
    for (const auto& frame : enumerate_dev_frames(k, 2)) {
      ++frames;
      for (unsigned mask = 1; mask < (1u << k); ++mask) {
        std::vector<StateIndex> keep;
        for (int s = 0; s < k; ++s) {
          if (mask >> s & 1u) keep.push_back(static_cast<StateIndex>(s));
        }
        const bool closed = factor_closure_check(frame, keep).closed;
        const bool dev = check_dev_laws(restrict_frame(frame, keep)).passed;
        mismatches += closed != dev;
        ++pairs;
      }
    }
  }
  return {mismatches == 0 && frames > 0, std::to_string(frames) + " frames, " + std::to_string(pairs) +
                                             " survivor sets, " + std::to_string(mismatches) + " mismatches"};
}

Outcome certificate_suite() {
  const auto exit_of = [](const std::string& file) {
    std::ostringstream out, err;
    return cli::run_cli({"verify-cert", data_path(file)}, out, err);
  };
  const int good = exit_of("certs/good.cert");
  const int diamond = exit_of("certs/bad_diamond.cert");
  const int uni = exit_of("certs/bad_union.cert");
  const auto rd = verify_certificate(parse_certificate(read_data("certs/bad_diamond.cert")));
  const auto ru = verify_certificate(parse_certificate(read_data("certs/bad_union.cert")));
  bool rows = !rd.accepted && rd.failure->row_kind == "diamond-row" && !ru.accepted && ru.failure->row_kind == "union-row";

  // soundness: every accepted certificate's tables agree with the model checker
  bool sound = true;
  for (const char* file : {"certs/good.cert", "certs/bad_diamond.cert", "certs/bad_union.cert"}) {
    const auto cert = parse_certificate(read_data(file));
    if (!verify_certificate(cert).accepted) continue;
    const auto model = certificate_model(cert);
    for (std::size_t k = 0; k < cert.closure.size(); ++k) {
      const auto truth = evaluate(model, cert.closure[k]);
      for (std::size_t t = 0; t < cert.states.size(); ++t) sound = sound && truth.test(t) == cert.types[t][k];
    }
    sound = sound && evaluate(model, cert.formula).test(cert.root);
  }
  std::ostringstream d;
  d << "exit codes " << good << "/" << diamond << "/" << uni << ", soundness " << (sound ? "ok" : "broken");
  return {good == 0 && diamond == 1 && uni == 1 && rows && sound, d.str()};
}

Outcome pattern_statuses() {
  const std::vector<std::pair<ScenarioKind, bool>> expected{
      {ScenarioKind::DevImpliesMixing, false},       {ScenarioKind::FactorClosureCharacterizes, false},
      {ScenarioKind::MissingCornerInDev, false},     {ScenarioKind::NonProductComponent, true},
      {ScenarioKind::UnsafePublicDeletion, true},    {ScenarioKind::RepairOneCorner, true},
      {ScenarioKind::BoundaryRowCreatesWitness, true}, {ScenarioKind::NewWitnessOldOrBoundary, false},
  };
  bool ok = true;
  std::ostringstream d;
  for (const auto& [kind, sat] : expected) {
    const auto start = Clock::now();
    const auto r = run_scenario(Scenario::defaults(kind));
    const double t = seconds_since(start);
    bool good = r.sat == sat && t < 60.0;
    if (kind == ScenarioKind::NonProductComponent) good = good && r.frame && r.frame->size() == 2;
    ok = ok && good;
    d << to_string(kind) << '=' << (r.sat ? "SAT" : "UNSAT") << '(' << static_cast<int>(t * 10) / 10.0 << "s) ";
  }
  auto s = d.str();
  s.pop_back();
  return {ok, s};
}

oracle::Rel successors(const ModelView& model, Coalition c) {
  oracle::Rel r;
  for (std::size_t s = 0; s < model.state_count(); ++s) {
    model.for_each_successor(c, s, [&](std::size_t t) {
      r.insert({static_cast<int>(s), static_cast<int>(t)});
      return true;
    });
  }
  return r;
}

Outcome biprofile_algebra() {
  std::mt19937 rng(99);
  int models = 0, failures = 0, formulas = 0;
  for (int round = 0; round < 24; ++round) {
    const int n = 1 + round % 3;
    const int m = n == 3 ? 2 : 3;
    const auto alts = letters(m);
    // Cartesian report domain with a random option set per agent
    std::vector<std::vector<LinearOrder>> options(static_cast<std::size_t>(n));
    for (auto& opts : options) {
      for (const auto& o : oracle::permutations(m)) {
        if (rng() % 3 != 0) opts.push_back(oracle::to_order(o));
      }
      if (opts.empty()) opts.push_back(LinearOrder::identity(m));
    }
    const ProfileSpace reports(DomainSpec::product(options), n, alts);
    std::vector<Profile> truth;
    std::map<Profile, Alternative> table;
    reports.for_each([&](const Profile& p, std::uint64_t) {
      table[p] = static_cast<Alternative>(rng() % static_cast<unsigned>(m));
      if (truth.empty() || rng() % 3 == 0) truth.push_back(p);
      return true;
    });
    const BiprofileModel model(Rule::table(n, alts, table), ProfileSpace(DomainSpec::list(truth), n, alts), reports);
    ++models;
    std::map<unsigned, oracle::Rel> rels;
    for (unsigned c = 0; c < (1u << n); ++c) rels[c] = successors(model, Coalition::from_mask(c));
    for (unsigned c = 0; c < (1u << n); ++c) {
      for (unsigned d = 0; d < (1u << n); ++d) {
        if (oracle::compose(rels[c], rels[d]) != rels[c | d]) ++failures;
        const auto x = alts.name(static_cast<Alternative>(rng() % static_cast<unsigned>(m)));
        const auto y = alts.name(static_cast<Alternative>(rng() % static_cast<unsigned>(m)));
        const auto phi = rng() % 2 ? Formula::conjunction(Formula::outcome(x), Formula::top(1, y))
                                   : Formula::disjunction(Formula::outcome(y), Formula::negation(Formula::outcome(x)));
        const auto stacked =
            Formula::diamond(Coalition::from_mask(c), Formula::diamond(Coalition::from_mask(d), phi));
        const auto joined = Formula::diamond(Coalition::from_mask(c | d), phi);
        if (evaluate(model, stacked) != evaluate(model, joined)) ++failures;
        ++formulas;
      }
    }
  }
  return {failures == 0 && models > 0, std::to_string(models) + " models, " + std::to_string(formulas) +
                                           " label pairs, " + std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"plurality-example", plurality_example},
      {"median-certificate", median_certificate},
      {"single-peaked-count", single_peaked_count},
      {"three-way-replay", three_way_replay},
      {"boundary-completeness", boundary_completeness},
      {"factor-closure-characterization", factor_closure_characterization},
      {"certificate-suite", certificate_suite},
      {"pattern-search-statuses", pattern_statuses},
      {"deviation-algebra", biprofile_algebra},
  };
  std::map<std::string, bool> passed;
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    passed[c.name] = o.pass;
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " (" << o.detail << ")" << std::endl;
  }
  // completeness itself is not finitely checkable; its finite shadows are
  const bool shadows = passed["factor-closure-characterization"] && passed["certificate-suite"] && passed["deviation-algebra"];
  std::cout << (shadows ? "PASS " : "FAIL ") << "finite-shadows-of-completeness (midpoints, certificate soundness, exact composition)"
            << std::endl;
  return all && shadows ? 0 : 1;
}
