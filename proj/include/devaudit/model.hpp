#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "devaudit/formula.hpp"
#include "devaudit/frame.hpp"

namespace devaudit {

using TruthSet = StateSet;

/// Read-only Kripke structure over coalition labels. Implemented by
/// explicit models over a LabelledFrame and by biprofile models whose
/// successors are generated on demand.
class ModelView {
 public:
  virtual ~ModelView() = default;

  virtual int agents() const = 0;
  virtual std::size_t state_count() const = 0;
  virtual std::string state_name(std::size_t s) const = 0;

  /// Whether the atom belongs to the model's vocabulary.
  virtual bool knows_atom(const Formula& atom) const = 0;
  virtual bool atom_holds(const Formula& atom, std::size_t s) const = 0;

  /// Visits E_C-successors of s; the visitor returns false to stop early.
  virtual void for_each_successor(Coalition c, std::size_t s,
                                  const std::function<bool(std::size_t)>& visit) const = 0;

  /// States with some E_C-successor in `operand`.
  virtual TruthSet diamond_set(Coalition c, const TruthSet& operand) const;
  /// States all of whose E_C-successors lie in `operand`.
  virtual TruthSet box_set(Coalition c, const TruthSet& operand) const;
  virtual TruthSet atom_set(const Formula& atom) const;
};

/// A LabelledFrame with a valuation mapping each state to the atoms
/// (canonical text) true there.
class ExplicitModel : public ModelView {
 public:
  /// `vocabulary` lists atoms that may be queried even when false
  /// everywhere; atoms appearing in the valuation are added to it.
  ExplicitModel(LabelledFrame frame, std::vector<std::set<std::string>> valuation,
                std::set<std::string> vocabulary = {});

  const LabelledFrame& frame() const noexcept { return frame_; }
  const std::set<std::string>& true_atoms(std::size_t s) const { return valuation_.at(s); }

  int agents() const override { return frame_.agents(); }
  std::size_t state_count() const override { return frame_.size(); }
  std::string state_name(std::size_t s) const override { return frame_.name(s); }
  bool knows_atom(const Formula& atom) const override;
  bool atom_holds(const Formula& atom, std::size_t s) const override;
  void for_each_successor(Coalition c, std::size_t s,
                          const std::function<bool(std::size_t)>& visit) const override;
  TruthSet diamond_set(Coalition c, const TruthSet& operand) const override;
  TruthSet box_set(Coalition c, const TruthSet& operand) const override;

 private:
  LabelledFrame frame_;
  std::vector<std::set<std::string>> valuation_;
  std::set<std::string> vocabulary_;
};

/// Bottom-up truth-set computation over every state, memoised per
/// subformula for the duration of the call. Throws Error(UnknownAtom) or
/// Error(OutOfRangeAgent).
TruthSet evaluate(const ModelView& model, const Formula& formula);

/// Top-down evaluation at a single state; suitable for lazy models too
/// large to enumerate.
bool holds_at(const ModelView& model, const Formula& formula, std::size_t state);

/// Parses `<state>: atom atom ...` lines into a valuation for `frame`.
std::vector<std::set<std::string>> parse_valuation(std::string_view text, const LabelledFrame& frame);

}  // namespace devaudit
