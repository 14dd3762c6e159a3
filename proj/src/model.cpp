#include "devaudit/model.hpp"

#include <unordered_map>

#include "devaudit/error.hpp"
#include "text.hpp"

namespace devaudit {

TruthSet ModelView::diamond_set(Coalition c, const TruthSet& operand) const {
  TruthSet out(state_count());
  for (std::size_t s = 0; s < state_count(); ++s) {
    bool hit = false;
    for_each_successor(c, s, [&](std::size_t t) {
      hit = operand.test(t);
      return !hit;
    });
    if (hit) out.set(s);
  }
  return out;
}

TruthSet ModelView::box_set(Coalition c, const TruthSet& operand) const {
  TruthSet out(state_count());
  for (std::size_t s = 0; s < state_count(); ++s) {
    bool all = true;
    for_each_successor(c, s, [&](std::size_t t) {
      all = operand.test(t);
      return all;
    });
    if (all) out.set(s);
  }
  return out;
}

TruthSet ModelView::atom_set(const Formula& atom) const {
  TruthSet out(state_count());
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (atom_holds(atom, s)) out.set(s);
  }
  return out;
}

// ------------------------------------------------------------ ExplicitModel

ExplicitModel::ExplicitModel(LabelledFrame frame, std::vector<std::set<std::string>> valuation,
                             std::set<std::string> vocabulary)
    : frame_(std::move(frame)), valuation_(std::move(valuation)), vocabulary_(std::move(vocabulary)) {
  if (valuation_.size() != frame_.size()) {
    raise(ErrorCode::InvalidArgument, "valuation size does not match the frame");
  }
  for (const auto& atoms : valuation_) vocabulary_.insert(atoms.begin(), atoms.end());
}

bool ExplicitModel::knows_atom(const Formula& atom) const { return vocabulary_.count(atom.text()) > 0; }

bool ExplicitModel::atom_holds(const Formula& atom, std::size_t s) const {
  return valuation_.at(s).count(atom.text()) > 0;
}

void ExplicitModel::for_each_successor(Coalition c, std::size_t s,
                                       const std::function<bool(std::size_t)>& visit) const {
  const StateSet& row = frame_.successors(c, s);
  for (auto t = row.find_first(); t != StateSet::npos; t = row.find_next(t)) {
    if (!visit(t)) return;
  }
}

TruthSet ExplicitModel::diamond_set(Coalition c, const TruthSet& operand) const {
  TruthSet out(state_count());
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (frame_.successors(c, s).intersects(operand)) out.set(s);
  }
  return out;
}

TruthSet ExplicitModel::box_set(Coalition c, const TruthSet& operand) const {
  TruthSet out(state_count());
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (frame_.successors(c, s).is_subset_of(operand)) out.set(s);
  }
  return out;
}

// --------------------------------------------------------------- evaluation

namespace {

void check_signature(const ModelView& model, const Formula& formula) {
  for (const Formula& atom : atoms_of(formula)) {
    if (!model.knows_atom(atom)) raise(ErrorCode::UnknownAtom, "unknown atom '" + atom.text() + "'");
    if (atom.kind() == FormulaKind::Preference || atom.kind() == FormulaKind::Top) {
      if (atom.agent() < 1 || atom.agent() > model.agents()) {
        raise(ErrorCode::OutOfRangeAgent, "atom '" + atom.text() + "' names an agent outside the model");
      }
    }
  }
  const Coalition grand = Coalition::grand(model.agents());
  for (Coalition c : coalitions_of(formula)) {
    if (!c.subset_of(grand)) {
      raise(ErrorCode::OutOfRangeAgent, "coalition " + c.to_string() + " outside the model's agents");
    }
  }
}

class Evaluator {
 public:
  explicit Evaluator(const ModelView& model) : model_(model) {}

  const TruthSet& eval(const Formula& f) {
    if (auto it = memo_.find(f.text()); it != memo_.end()) return it->second;
    TruthSet result = compute(f);
    return memo_.emplace(f.text(), std::move(result)).first->second;
  }

 private:
  TruthSet compute(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Outcome:
      case FormulaKind::Preference:
      case FormulaKind::Top:
      case FormulaKind::Letter:
        return model_.atom_set(f);
      case FormulaKind::Not: {
        TruthSet out = eval(f.operand());
        out.flip();
        return out;
      }
      case FormulaKind::And: {
        TruthSet out = eval(f.lhs());
        out &= eval(f.rhs());
        return out;
      }
      case FormulaKind::Or: {
        TruthSet out = eval(f.lhs());
        out |= eval(f.rhs());
        return out;
      }
      case FormulaKind::Implies: {
        TruthSet out = eval(f.lhs());
        out.flip();
        out |= eval(f.rhs());
        return out;
      }
      case FormulaKind::Diamond: {
        const TruthSet operand = eval(f.operand());
        return model_.diamond_set(f.coalition(), operand);
      }
      case FormulaKind::Box: {
        const TruthSet operand = eval(f.operand());
        return model_.box_set(f.coalition(), operand);
      }
    }
    throw std::logic_error("unreachable formula kind");
  }

  const ModelView& model_;
  std::unordered_map<std::string, TruthSet> memo_;
};

bool local(const ModelView& model, const Formula& f, std::size_t s) {
  switch (f.kind()) {
    case FormulaKind::Outcome:
    case FormulaKind::Preference:
    case FormulaKind::Top:
    case FormulaKind::Letter:
      return model.atom_holds(f, s);
    case FormulaKind::Not: return !local(model, f.operand(), s);
    case FormulaKind::And: return local(model, f.lhs(), s) && local(model, f.rhs(), s);
    case FormulaKind::Or: return local(model, f.lhs(), s) || local(model, f.rhs(), s);
    case FormulaKind::Implies: return !local(model, f.lhs(), s) || local(model, f.rhs(), s);
    case FormulaKind::Diamond: {
      bool hit = false;
      model.for_each_successor(f.coalition(), s, [&](std::size_t t) {
        hit = local(model, f.operand(), t);
        return !hit;
      });
      return hit;
    }
    case FormulaKind::Box: {
      bool all = true;
      model.for_each_successor(f.coalition(), s, [&](std::size_t t) {
        all = local(model, f.operand(), t);
        return all;
      });
      return all;
    }
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace

TruthSet evaluate(const ModelView& model, const Formula& formula) {
  check_signature(model, formula);
  Evaluator ev(model);
  return ev.eval(formula);
}

bool holds_at(const ModelView& model, const Formula& formula, std::size_t state) {
  check_signature(model, formula);
  if (state >= model.state_count()) raise(ErrorCode::UnknownState, "state index out of range");
  return local(model, formula, state);
}

std::vector<std::set<std::string>> parse_valuation(std::string_view input, const LabelledFrame& frame) {
  std::vector<std::set<std::string>> out(frame.size());
  for (const auto& [number, line] : text::content_lines(input)) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw SyntaxError(number, true, "expected '<state>: atoms'");
    const auto state = text::trim(line.substr(0, colon));
    const auto idx = frame.find(state);
    if (!idx) raise(ErrorCode::UnknownState, "line " + std::to_string(number) + ": unknown state '" + std::string(state) + "'");
    for (auto atom : text::split_ws(line.substr(colon + 1))) out[*idx].emplace(atom);
  }
  return out;
}

}  // namespace devaudit
