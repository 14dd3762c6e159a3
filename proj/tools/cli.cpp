#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "devaudit/audit.hpp"
#include "devaudit/biprofile.hpp"
#include "devaudit/certificate.hpp"
#include "devaudit/error.hpp"
#include "devaudit/formula.hpp"
#include "devaudit/frame.hpp"
#include "devaudit/manipulation.hpp"
#include "devaudit/model.hpp"
#include "devaudit/pattern_search.hpp"

namespace devaudit::cli {

namespace {

enum class Format { Human, Tsv, JsonLines };

using Fields = std::vector<std::pair<std::string, std::string>>;

/// One record per line in the chosen format.
class Reporter {
 public:
  Reporter(Format format, std::ostream& out) : format_(format), out_(out) {}

  void record(const std::string& status, const Fields& fields = {}) {
    switch (format_) {
      case Format::Tsv:
        out_ << status;
        for (const auto& [key, value] : fields) out_ << '\t' << value;
        out_ << '\n';
        break;
      case Format::JsonLines: {
        nlohmann::ordered_json j;
        j["status"] = status;
        for (const auto& [key, value] : fields) j[key] = value;
        out_ << j.dump() << '\n';
        break;
      }
      case Format::Human:
        out_ << status << '\n';
        for (const auto& [key, value] : fields) out_ << "  " << key << ": " << value << '\n';
        break;
    }
  }

  Format format() const { return format_; }

 private:
  Format format_;
  std::ostream& out_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// `@path` reads a DOMAIN file; anything else is DOMAIN text.
DomainSpec load_domain(const std::string& value, const Rule& rule) {
  const std::string text = !value.empty() && value[0] == '@' ? read_file(value.substr(1)) : value;
  return parse_domain(text, rule.alternatives(), rule.agents());
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Fields witness_record(const WitnessRecord& w, const AlternativeSet& alts) {
  return {{"true", profile_text(w.truth, alts)},       {"current", profile_text(w.current, alts)},
          {"coalition", w.coalition.to_string()},      {"deviated", profile_text(w.deviated, alts)},
          {"x", alts.name(w.x)},                       {"y", alts.name(w.y)}};
}

Fields gap_record(const ProfileMidpointGap& g, const AlternativeSet& alts) {
  return {{"source", profile_text(g.source, alts)},
          {"first", g.first.to_string()},
          {"second", g.second.to_string()},
          {"target", profile_text(g.target, alts)}};
}

struct Common {
  std::string format = "tsv";
  unsigned jobs = 1;
  std::uint64_t budget_states = kDefaultStateBudget;
  std::uint64_t seed = 1;
};

struct Args {
  std::string input;
  std::string rule;
  std::string domain = "universal";
  std::string report_domain;
  std::string formula;
  std::string frame;
  std::string valuation;
  std::string state;
  std::string truth;
  std::string report;
  std::string witness;
  std::string survivors;
  std::string survivor_states;
  std::string axis;
  std::string convention = "weak";
  std::string mode = "explicit";
  bool all = false;
  int max_size = 0;
  int states = 0;
  int agents = 2;
  int sample = 0;
};

ImprovementConvention convention_of(const std::string& s) {
  return s == "strict" ? ImprovementConvention::AllStrict : ImprovementConvention::WeakAllStrictSome;
}

ScanOptions scan_options(const Common& common, const Args& a) {
  ScanOptions o;
  o.jobs = std::max(1u, common.jobs);
  o.max_coalition_size = a.max_size;
  o.convention = convention_of(a.convention);
  return o;
}

struct RuleSetup {
  Rule rule;
  ProfileSpace truth;
  ProfileSpace reports;
};

RuleSetup rule_setup(const Args& a) {
  Rule rule = parse_rule(read_file(a.rule));
  const auto truth_spec = load_domain(a.domain, rule);
  const auto report_spec = a.report_domain.empty() ? truth_spec : load_domain(a.report_domain, rule);
  ProfileSpace truth(truth_spec, rule.agents(), rule.alternatives());
  ProfileSpace reports(report_spec, rule.agents(), rule.alternatives());
  return RuleSetup{std::move(rule), std::move(truth), std::move(reports)};
}

// ------------------------------------------------------------ subcommands

int cmd_check_frame(const Args& a, Reporter& rep) {
  const auto frame = parse_frame(read_file(a.input));
  const auto report = check_dev_laws(frame);
  for (const auto& v : report.violations) rep.record("VIOLATION", {{"law", v.describe(frame)}});
  if (!report.passed) return kExitRejected;
  rep.record("DEV", {{"states", std::to_string(frame.size())}, {"agents", std::to_string(frame.agents())}});
  for (const auto& component : grand_components(frame)) {
    std::string names;
    for (auto s : component) names += (names.empty() ? "" : " ") + frame.name(s);
    const auto verdict = coordinate_separation_check(frame, component);
    std::string sep = "separated";
    if (!verdict.separated) {
      sep = "unseparated " + frame.name(verdict.counterexample->first) + " " + frame.name(verdict.counterexample->second);
    }
    rep.record("COMPONENT", {{"states", names}, {"separation", sep}});
  }
  if (a.survivor_states.empty()) return kExitClean;
  std::vector<StateIndex> survivors;
  std::istringstream in(a.survivor_states);
  for (std::string name; in >> name;) survivors.push_back(frame.index_of(name));
  const auto closure = factor_closure_check(frame, survivors);
  if (closure.closed) {
    rep.record("FACTOR-CLOSED");
    return kExitClean;
  }
  const auto& m = *closure.missing;
  rep.record("MISSING-MIDPOINT", {{"source", frame.name(m.source)},
                                  {"first", m.first.to_string()},
                                  {"second", m.second.to_string()},
                                  {"target", frame.name(m.target)}});
  return kExitFound;
}

int cmd_model_check(const Args& a, const Common& common, Reporter& rep) {
  if (!a.frame.empty()) {
    const auto frame = parse_frame(read_file(a.frame));
    auto valuation = a.valuation.empty() ? std::vector<std::set<std::string>>(frame.size())
                                         : parse_valuation(read_file(a.valuation), frame);
    std::set<std::string> vocabulary;
    for (const auto& v : valuation) vocabulary.insert(v.begin(), v.end());
    const ExplicitModel model(frame, std::move(valuation), std::move(vocabulary));
    const auto phi = parse_formula(a.formula, FormulaContext{frame.agents(), {}});
    const auto truth = evaluate(model, phi);
    if (!a.state.empty()) {
      rep.record(truth.test(frame.index_of(a.state)) ? "TRUE" : "FALSE", {{"state", a.state}});
      return kExitClean;
    }
    std::string names;
    for (auto s = truth.find_first(); s != StateSet::npos; s = truth.find_next(s)) {
      names += (names.empty() ? "" : " ") + frame.name(s);
    }
    rep.record("TRUTHSET", {{"states", names}});
    return kExitClean;
  }
  auto setup = rule_setup(a);
  const auto& alts = setup.rule.alternatives();
  const auto phi = parse_formula(a.formula, FormulaContext{setup.rule.agents(), alts.names()});
  BiprofileOptions options;
  options.mode = a.mode == "lazy" ? BiprofileOptions::Mode::Lazy : BiprofileOptions::Mode::Explicit;
  options.state_budget = common.budget_states;
  const BiprofileModel model(setup.rule, setup.truth, setup.reports, options);
  const auto r = parse_profile(a.truth, alts, setup.rule.agents());
  const auto p = a.report.empty() ? r : parse_profile(a.report, alts, setup.rule.agents());
  const auto state = model.state_of(r, p);
  if (!state) raise(ErrorCode::InvalidArgument, "state (R | P) is outside the model's domains");
  const bool holds = options.mode == BiprofileOptions::Mode::Lazy ? holds_at(model, phi, *state)
                                                                  : evaluate(model, phi).test(*state);
  rep.record(holds ? "TRUE" : "FALSE", {{"state", model.state_name(*state)}});
  return kExitClean;
}

int emit_witnesses(const std::vector<WitnessRecord>& ws, const AlternativeSet& alts, Reporter& rep) {
  for (const auto& w : ws) rep.record("WITNESS", witness_record(w, alts));
  if (ws.empty()) {
    rep.record("CLEAN");
    return kExitClean;
  }
  return kExitFound;
}

int cmd_audit(const Args& a, const Common& common, Reporter& rep, bool group) {
  const auto setup = rule_setup(a);
  const auto options = scan_options(common, a);
  const auto& alts = setup.rule.alternatives();
  if (a.all) return emit_witnesses(enumerate_witnesses(setup.rule, setup.truth, setup.reports, options), alts, rep);
  std::optional<WitnessRecord> w = group ? check_group_strategy_proofness(setup.rule, setup.truth, setup.reports, options)
                                         : check_strategy_proofness(setup.rule, setup.truth, setup.reports, options);
  return emit_witnesses(w ? std::vector<WitnessRecord>{*w} : std::vector<WitnessRecord>{}, alts, rep);
}

int cmd_replay(const Args& a, Reporter& rep) {
  auto setup = rule_setup(a);
  const auto& alts = setup.rule.alternatives();
  const auto w = parse_witness(read_file(a.witness), alts, setup.rule.agents());
  AuditEnvironment env{setup.rule, setup.truth, setup.reports, std::nullopt};
  if (!a.survivors.empty()) env.survivors = parse_profile_list(read_file(a.survivors), alts, setup.rule.agents());
  const auto result = replay_witness(w, env);
  Fields fields{{"coalition", w.coalition.to_string()}, {"x", alts.name(w.x)}, {"y", alts.name(w.y)}};
  if (result.gap) {
    for (auto& f : gap_record(*result.gap, alts)) fields.push_back(std::move(f));
  }
  rep.record(result.label(), fields);
  const bool found = result.status == ReplayStatus::SameManipulationWitness || result.status == ReplayStatus::UnsafeUpdate;
  return found ? kExitFound : kExitClean;
}

int cmd_boundary(const Args& a, const Common& common, Reporter& rep) {
  const auto setup = rule_setup(a);
  const auto& alts = setup.rule.alternatives();
  const auto records = boundary_audit(setup.rule, setup.truth, setup.reports, scan_options(common, a));
  for (const auto& b : records) {
    rep.record("BOUNDARY", {{"true", profile_text(b.truth, alts)},
                            {"coalition", b.coalition.to_string()},
                            {"deviated", profile_text(b.deviated, alts)},
                            {"f", alts.name(b.f_of_truth)},
                            {"g", alts.name(b.g_of_deviated)}});
  }
  if (records.empty()) {
    rep.record("CLEAN");
    return kExitClean;
  }
  return kExitFound;
}

int cmd_update_safety(const Args& a, const Common& common, Reporter& rep) {
  const Rule rule = parse_rule(read_file(a.rule));
  const auto& alts = rule.alternatives();
  const ProfileSpace reports(load_domain(a.report_domain.empty() ? a.domain : a.report_domain, rule), rule.agents(), alts);
  const auto truth = parse_profile(a.truth, alts, rule.agents());
  const auto survivors = parse_profile_list(read_file(a.survivors), alts, rule.agents());
  const auto result = update_safety_audit(rule, truth, reports, survivors, common.budget_states);
  if (result.safe) {
    rep.record("SAFE", {{"survivors", std::to_string(survivors.size())}});
    return kExitClean;
  }
  rep.record("UNSAFE", gap_record(*result.gap, alts));
  return kExitFound;
}

int cmd_verify_cert(const Args& a, Reporter& rep, std::ostream& err) {
  const auto cert = parse_certificate(read_file(a.input));
  const auto result = verify_certificate(cert);
  if (result.accepted) {
    rep.record("ACCEPT");
    return kExitClean;
  }
  const auto& f = *result.failure;
  Reporter(rep.format(), err).record("REJECT", {{"row", f.row_kind}, {"location", f.location}, {"reason", f.reason}});
  return kExitRejected;
}

int cmd_gen_sp(const Args& a, const Common& common, Reporter& rep) {
  // Alternatives are read off the axis itself.
  std::vector<std::string> names;
  std::istringstream in(a.axis);
  for (std::string tok; in >> tok;) {
    if (tok != "<") names.push_back(tok);
  }
  const AlternativeSet alts(names);
  const auto axis = parse_axis(a.axis, alts);
  const auto orders = generate_single_peaked(axis);
  if (a.sample <= 0) {
    for (const auto& o : orders) rep.record("ORDER", {{"order", o.text(alts)}});
    return kExitClean;
  }
  std::mt19937_64 rng(common.seed);
  std::uniform_int_distribution<std::size_t> pick(0, orders.size() - 1);
  for (int k = 0; k < a.sample; ++k) {
    Profile p;
    for (int i = 0; i < a.agents; ++i) p.push_back(orders[pick(rng)]);
    rep.record("PROFILE", {{"profile", profile_text(p, alts)}});
  }
  return kExitClean;
}

int cmd_search(const Args& a, const Common& common, std::ostream& out) {
  const auto kind = parse_scenario_kind(a.input);
  auto scenario = Scenario::defaults(kind);
  if (a.states > 0) scenario.max_states = a.states;
  scenario.agents = a.agents;
  scenario.jobs = std::max(1u, common.jobs);
  const auto result = run_scenario(scenario);
  out << print_search_result(scenario, result);
  return result.sat && !scenario_expects_sat(kind) ? kExitFound : kExitClean;
}

int cmd_gs_report(const Args& a, const Common& common, Reporter& rep) {
  const Rule rule = parse_rule(read_file(a.rule));
  const auto report = gs_condition_report(rule, scan_options(common, a));
  rep.record("STRATEGY-PROOF", {{"value", yes_no(report.sp)}});
  rep.record("ONTO", {{"value", yes_no(report.onto)}});
  for (std::size_t i = 0; i < report.non_dictatorial.size(); ++i) {
    rep.record("NON-DICTATORIAL", {{"agent", std::to_string(i + 1)}, {"value", yes_no(report.non_dictatorial[i])}});
  }
  if (report.sp_witness) rep.record("WITNESS", witness_record(*report.sp_witness, rule.alternatives()));
  return kExitClean;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite audits for biprofile deviation logic", "devaudit"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  Args a;
  app.add_option("--format", common.format, "human, tsv or json-lines")
      ->check(CLI::IsMember({"human", "tsv", "json-lines"}));
  app.add_option("--jobs", common.jobs, "worker threads");
  app.add_option("--budget-states", common.budget_states, "state budget for explicit models");
  app.add_option("--seed", common.seed, "seed for randomized helpers");

  auto rule_flags = [&](CLI::App* sub) {
    sub->add_option("--rule", a.rule, "RULE file")->required();
    sub->add_option("--domain", a.domain, "true domain: DOMAIN text or @file");
    sub->add_option("--report-domain", a.report_domain, "report domain (defaults to --domain)");
  };
  auto scan_flags = [&](CLI::App* sub) {
    sub->add_option("--convention", a.convention, "weak or strict")->check(CLI::IsMember({"weak", "strict"}));
  };

  auto* check_frame = app.add_subcommand("check-frame", "check the Dev(N) laws of a FRAME file");
  check_frame->add_option("frame", a.input)->required();
  check_frame->add_option("--survivors", a.survivor_states, "space-separated survivor states");

  auto* model_check = app.add_subcommand("model-check", "evaluate a formula");
  model_check->add_option("--formula", a.formula)->required();
  model_check->add_option("--frame", a.frame, "FRAME file (explicit model)");
  model_check->add_option("--valuation", a.valuation, "valuation file for --frame");
  model_check->add_option("--state", a.state, "state of --frame");
  model_check->add_option("--rule", a.rule, "RULE file (biprofile model)");
  model_check->add_option("--domain", a.domain);
  model_check->add_option("--report-domain", a.report_domain);
  model_check->add_option("--truth", a.truth, "true profile R");
  model_check->add_option("--report", a.report, "report profile P (defaults to R)");
  model_check->add_option("--mode", a.mode)->check(CLI::IsMember({"explicit", "lazy"}));

  auto* audit_sp = app.add_subcommand("audit-sp", "singleton strategy-proofness audit");
  rule_flags(audit_sp);
  scan_flags(audit_sp);
  audit_sp->add_flag("--all", a.all, "list every witness");

  auto* audit_group = app.add_subcommand("audit-group-sp", "group strategy-proofness audit");
  rule_flags(audit_group);
  scan_flags(audit_group);
  audit_group->add_flag("--all", a.all, "list every witness");
  audit_group->add_option("--max-size", a.max_size, "largest coalition scanned");

  auto* replay = app.add_subcommand("replay", "replay a stored witness");
  rule_flags(replay);
  replay->add_option("--witness", a.witness)->required();
  replay->add_option("--survivors", a.survivors, "survivor profile list");

  auto* boundary = app.add_subcommand("boundary-audit", "scan the boundary rows of an extension");
  rule_flags(boundary);
  scan_flags(boundary);

  auto* update = app.add_subcommand("update-safety", "factor-closure audit of a public deletion");
  update->add_option("--rule", a.rule)->required();
  update->add_option("--domain", a.domain);
  update->add_option("--report-domain", a.report_domain);
  update->add_option("--truth", a.truth)->required();
  update->add_option("--survivors", a.survivors)->required();

  auto* verify = app.add_subcommand("verify-cert", "verify a typed certificate");
  verify->add_option("certificate", a.input)->required();

  auto* gen_sp = app.add_subcommand("gen-sp", "generate single-peaked orders");
  gen_sp->add_option("--axis", a.axis)->required();
  gen_sp->add_option("--sample", a.sample, "random profiles instead of the order list");
  gen_sp->add_option("--agents", a.agents);

  auto* search = app.add_subcommand("search", "bounded pattern search");
  search->add_option("kind", a.input)->required();
  search->add_option("--states", a.states);
  search->add_option("--agents", a.agents);

  auto* gs = app.add_subcommand("gs-report", "impossibility-theorem conditions on the universal domain");
  gs->add_option("--rule", a.rule)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitClean;
  } catch (const CLI::ParseError& e) {
    err << "usage: devaudit <subcommand> [options]; see --help\n" << e.what() << '\n';
    return kExitRejected;
  }

  const Format format = common.format == "human" ? Format::Human : common.format == "json-lines" ? Format::JsonLines : Format::Tsv;
  Reporter rep(format, out);
  try {
    if (*check_frame) return cmd_check_frame(a, rep);
    if (*model_check) {
      if (a.frame.empty() == a.rule.empty() || (!a.rule.empty() && a.truth.empty())) {
        err << "usage: devaudit model-check --formula F (--frame FILE [--valuation FILE] [--state S] | --rule FILE --truth PROFILE)\n";
        return kExitRejected;
      }
      return cmd_model_check(a, common, rep);
    }
    if (*audit_sp) return cmd_audit(a, common, rep, false);
    if (*audit_group) return cmd_audit(a, common, rep, true);
    if (*replay) return cmd_replay(a, rep);
    if (*boundary) return cmd_boundary(a, common, rep);
    if (*update) return cmd_update_safety(a, common, rep);
    if (*verify) return cmd_verify_cert(a, rep, err);
    if (*gen_sp) return cmd_gen_sp(a, common, rep);
    if (*search) return cmd_search(a, common, out);
    if (*gs) return cmd_gs_report(a, common, rep);
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << '\n';
    return kExitRejected;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitRejected;
  }
  err << "usage: devaudit <subcommand> [options]\n";
  return kExitRejected;
}

}  // namespace devaudit::cli
