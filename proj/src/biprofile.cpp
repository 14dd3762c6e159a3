#include "devaudit/biprofile.hpp"

#include "devaudit/error.hpp"

namespace devaudit {

BiprofileModel::BiprofileModel(Rule rule, ProfileSpace true_domain, ProfileSpace report_domain,
                               BiprofileOptions options)
    : rule_(std::move(rule)), truth_(std::move(true_domain)), reports_(std::move(report_domain)) {
  if (truth_.agents() != rule_.agents() || reports_.agents() != rule_.agents()) {
    raise(ErrorCode::InvalidArgument, "rule and domains disagree on the number of agents");
  }
  if (!(truth_.alternatives() == rule_.alternatives()) || !(reports_.alternatives() == rule_.alternatives())) {
    raise(ErrorCode::InvalidArgument, "rule and domains disagree on the alternatives");
  }
  const auto d = truth_.size();
  const auto m = reports_.size();
  if (m != 0 && d > std::numeric_limits<std::uint64_t>::max() / m) {
    raise(ErrorCode::StateBudgetExceeded, "state count overflows");
  }
  const auto states = d * m;
  if (states > std::numeric_limits<std::size_t>::max()) raise(ErrorCode::StateBudgetExceeded, "state count overflows");
  count_ = static_cast<std::size_t>(states);
  if (options.require_sincere && !space_subset(truth_, reports_)) {
    raise(ErrorCode::TruthNotAdmissible, "some true profile is not an admissible report");
  }
  if (options.mode == BiprofileOptions::Mode::Explicit) {
    if (states > options.state_budget) {
      raise(ErrorCode::StateBudgetExceeded, std::to_string(d) + " x " + std::to_string(m) + " states exceed the budget of " +
                                                std::to_string(options.state_budget) + "; use lazy mode");
    }
    outcomes_.reserve(static_cast<std::size_t>(m));
    reports_.for_each([&](const Profile& p, std::uint64_t) {
      outcomes_.push_back(rule_.apply(p));
      return true;
    });
  }
}

std::optional<std::size_t> BiprofileModel::state_of(const Profile& truth, const Profile& report) const {
  const auto r = truth_.index_of(truth);
  const auto p = reports_.index_of(report);
  if (!r || !p) return std::nullopt;
  return state_of(*r, *p);
}

std::size_t BiprofileModel::sincere_state(const Profile& truth) const {
  const auto r = truth_.index_of(truth);
  if (!r) raise(ErrorCode::InvalidArgument, "profile is not in the true domain");
  const auto p = reports_.index_of(truth);
  if (!p) raise(ErrorCode::TruthNotAdmissible, "true profile is not an admissible report");
  return state_of(*r, *p);
}

std::vector<std::size_t> BiprofileModel::sincere_states() const {
  std::vector<std::size_t> out;
  truth_.for_each([&](const Profile& r, std::uint64_t ri) {
    if (auto p = reports_.index_of(r)) out.push_back(state_of(ri, *p));
    return true;
  });
  return out;
}

Alternative BiprofileModel::outcome_at(std::size_t s) const {
  const auto p = s % reports_.size();
  if (!outcomes_.empty()) return outcomes_[p];
  return rule_.apply(reports_.profile(p));
}

std::string BiprofileModel::state_name(std::size_t s) const {
  const auto& alts = rule_.alternatives();
  return "(" + profile_text(truth_at(s), alts) + " | " + profile_text(report_at(s), alts) + ")";
}

bool BiprofileModel::knows_atom(const Formula& atom) const {
  const auto& alts = rule_.alternatives();
  switch (atom.kind()) {
    case FormulaKind::Outcome: return alts.find(atom.name()).has_value();
    case FormulaKind::Preference:
      return alts.find(atom.name()) && alts.find(atom.second_name()) && atom.agent() >= 1 && atom.agent() <= agents();
    case FormulaKind::Top: return alts.find(atom.name()) && atom.agent() >= 1 && atom.agent() <= agents();
    default: return false;
  }
}

bool BiprofileModel::atom_holds(const Formula& atom, std::size_t s) const {
  const auto& alts = rule_.alternatives();
  switch (atom.kind()) {
    case FormulaKind::Outcome: return outcome_at(s) == alts.index_of(atom.name());
    case FormulaKind::Preference: {
      const Profile truth = truth_at(s);
      const auto& order = truth[static_cast<std::size_t>(atom.agent() - 1)];
      return order.prefers(alts.index_of(atom.name()), alts.index_of(atom.second_name()));
    }
    case FormulaKind::Top: {
      const Profile truth = truth_at(s);
      return truth[static_cast<std::size_t>(atom.agent() - 1)].top() == alts.index_of(atom.name());
    }
    default: raise(ErrorCode::UnknownAtom, "letter '" + atom.text() + "' has no meaning in a biprofile model");
  }
}

void BiprofileModel::for_each_successor(Coalition c, std::size_t s,
                                        const std::function<bool(std::size_t)>& visit) const {
  const auto r = s / reports_.size();
  const auto p = reports_.profile(s % reports_.size());
  reports_.for_each_deviation(p, c, [&](const Profile&, std::uint64_t q) { return visit(state_of(r, q)); });
}

ExplicitModel BiprofileModel::to_explicit(std::size_t max_states) const {
  if (count_ > max_states) {
    raise(ErrorCode::StateBudgetExceeded, std::to_string(count_) + " states exceed the materialisation limit");
  }
  const auto& alts = rule_.alternatives();
  const int n = agents();
  std::vector<std::string> names;
  names.reserve(count_);
  for (std::size_t s = 0; s < count_; ++s) names.push_back("s" + std::to_string(s));
  LabelledFrame frame(n, names);
  for (Coalition c : all_labels(n)) {
    if (!c.empty()) frame.mark_declared(c);
    for (std::size_t s = 0; s < count_; ++s) {
      for_each_successor(c, s, [&](std::size_t t) {
        frame.add_pair(c, s, t);
        return true;
      });
    }
  }
  std::set<std::string> vocabulary;
  for (const auto& x : alts.names()) {
    vocabulary.insert(Formula::outcome(x).text());
    for (int i = 1; i <= n; ++i) {
      vocabulary.insert(Formula::top(i, x).text());
      for (const auto& y : alts.names()) vocabulary.insert(Formula::preference(i, x, y).text());
    }
  }
  std::vector<std::set<std::string>> valuation(count_);
  for (std::size_t s = 0; s < count_; ++s) {
    const auto truth = truth_at(s);
    valuation[s].insert(Formula::outcome(alts.name(outcome_at(s))).text());
    for (int i = 1; i <= n; ++i) {
      const auto& order = truth[static_cast<std::size_t>(i - 1)];
      valuation[s].insert(Formula::top(i, alts.name(order.top())).text());
      for (int x = 0; x < alts.size(); ++x) {
        for (int y = 0; y < alts.size(); ++y) {
          if (order.prefers(x, y)) valuation[s].insert(Formula::preference(i, alts.name(x), alts.name(y)).text());
        }
      }
    }
  }
  return ExplicitModel(std::move(frame), std::move(valuation), std::move(vocabulary));
}

}  // namespace devaudit
