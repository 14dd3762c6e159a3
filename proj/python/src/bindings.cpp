#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "devaudit/audit.hpp"
#include "devaudit/biprofile.hpp"
#include "devaudit/certificate.hpp"
#include "devaudit/error.hpp"
#include "devaudit/manipulation.hpp"
#include "devaudit/pattern_search.hpp"
#include "devaudit/witness.hpp"

namespace py = pybind11;
using namespace devaudit;

namespace {

ProfileSpace space(const Rule& rule, const std::string& domain) {
  return ProfileSpace(parse_domain(domain, rule.alternatives(), rule.agents()), rule.agents(), rule.alternatives());
}

py::dict witness_dict(const WitnessRecord& w, const AlternativeSet& alts) {
  py::dict d;
  d["true"] = profile_text(w.truth, alts);
  d["current"] = profile_text(w.current, alts);
  d["coalition"] = w.coalition.to_string();
  d["deviated"] = profile_text(w.deviated, alts);
  d["x"] = alts.name(w.x);
  d["y"] = alts.name(w.y);
  return d;
}

}  // namespace

PYBIND11_MODULE(_devaudit, m) {
  m.doc() = "Finite audits for report-deviation frames and strategy-proofness";

  static py::exception<Error> error(m, "DevauditError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<LabelledFrame>(m, "Frame")
      .def(py::init([](const std::string& text) { return parse_frame(text); }), py::arg("text"))
      .def_property_readonly("agents", &LabelledFrame::agents)
      .def_property_readonly("states", &LabelledFrame::states)
      .def("related",
           [](const LabelledFrame& f, const std::string& label, const std::string& s, const std::string& t) {
             return f.related(parse_coalition(label, f.agents()), f.index_of(s), f.index_of(t));
           })
      .def("__len__", &LabelledFrame::size)
      .def("__str__", [](const LabelledFrame& f) { return print_frame(f); });

  m.def("check_dev_laws", [](const LabelledFrame& f) {
    std::vector<std::string> out;
    for (const auto& v : check_dev_laws(f).violations) out.push_back(v.describe(f));
    return out;
  }, "Violated law instances; empty when the frame is a Dev(N)-frame.");

  m.def("factor_closure", [](const LabelledFrame& f, const std::vector<std::string>& survivors) -> py::object {
    std::vector<StateIndex> keep;
    for (const auto& s : survivors) keep.push_back(f.index_of(s));
    const auto v = factor_closure_check(f, keep);
    if (v.closed) return py::none();
    const auto& g = *v.missing;
    return py::make_tuple(f.name(g.source), g.first.to_string(), g.second.to_string(), f.name(g.target));
  }, "None when closed, else (source, C, D, target) of the first missing midpoint.");

  m.def("formula_text", [](const std::string& text, int agents, const std::vector<std::string>& alternatives) {
    return parse_formula(text, {agents, alternatives}).text();
  }, py::arg("text"), py::arg("agents"), py::arg("alternatives") = std::vector<std::string>{});

  m.def("model_check", [](const LabelledFrame& f, const std::string& valuation, const std::string& formula) {
    const ExplicitModel model(f, parse_valuation(valuation, f));
    const auto truth = evaluate(model, parse_formula(formula, {f.agents(), {}}));
    std::vector<std::string> out;
    for (std::size_t s = 0; s < f.size(); ++s) {
      if (truth.test(s)) out.push_back(f.name(s));
    }
    return out;
  }, "States of the frame where the formula holds.");

  py::class_<Rule>(m, "Rule")
      .def(py::init([](const std::string& text) { return parse_rule(text); }), py::arg("text"))
      .def_property_readonly("agents", &Rule::agents)
      .def_property_readonly("alternatives", [](const Rule& r) { return r.alternatives().names(); })
      .def("describe", &Rule::describe)
      .def("__call__", [](const Rule& r, const std::string& profile) {
        return r.alternatives().name(r.apply(parse_profile(profile, r.alternatives(), r.agents())));
      });

  m.def("strategy_proofness_witness",
        [](const Rule& rule, const std::string& domain, const std::string& report_domain) -> py::object {
          const auto w = check_strategy_proofness(rule, space(rule, domain),
                                                  space(rule, report_domain.empty() ? domain : report_domain));
          if (!w) return py::none();
          return witness_dict(*w, rule.alternatives());
        },
        py::arg("rule"), py::arg("domain") = "universal", py::arg("report_domain") = "");

  m.def("replay",
        [](const Rule& rule, const std::string& witness, const std::string& domain,
           const std::optional<std::string>& survivors) {
          const auto w = parse_witness(witness, rule.alternatives(), rule.agents());
          AuditEnvironment env{rule, space(rule, domain), space(rule, domain), std::nullopt};
          if (survivors) env.survivors = parse_profile_list(*survivors, rule.alternatives(), rule.agents());
          return replay_witness(w, env).label();
        },
        py::arg("rule"), py::arg("witness"), py::arg("domain") = "universal", py::arg("survivors") = py::none());

  m.def("generate_single_peaked", [](const std::vector<std::string>& axis) {
    const AlternativeSet alts(axis);
    std::vector<std::string> out;
    for (const auto& o : generate_single_peaked(LinearOrder::identity(static_cast<int>(axis.size())))) {
      out.push_back(o.text(alts));
    }
    return out;
  }, "Single-peaked orders over an axis given left to right.");

  m.def("verify_certificate", [](const std::string& text) -> py::object {
    const auto r = verify_certificate(parse_certificate(text));
    if (r.accepted) return py::none();
    return py::make_tuple(r.failure->row_kind, r.failure->location, r.failure->reason);
  }, "None when accepted, else (row_kind, location, reason).");

  m.def("search", [](const std::string& kind, std::optional<int> states) {
    auto sc = Scenario::defaults(parse_scenario_kind(kind));
    if (states) sc.max_states = *states;
    const auto r = run_scenario(sc);
    return py::make_tuple(r.sat, print_search_result(sc, r));
  }, py::arg("kind"), py::arg("states") = py::none());

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
