#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "devaudit/coalition.hpp"

namespace devaudit {

using StateIndex = std::size_t;
/// One row of a relation table, or a set of states.
using StateSet = boost::dynamic_bitset<std::uint64_t>;

/// Finite state set with one binary relation per coalition label over N.
///
/// Self-loops are implied for every label and state and are always present
/// in the stored rows. Symmetry is not implied. Relations for all 2^n labels
/// are held; labels never touched stay at the identity.
class LabelledFrame {
 public:
  LabelledFrame(int agents, std::vector<std::string> states);

  int agents() const noexcept { return agents_; }
  std::size_t size() const noexcept { return states_.size(); }
  Coalition grand() const noexcept { return Coalition::grand(agents_); }

  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::string& name(StateIndex s) const { return states_.at(s); }
  std::optional<StateIndex> find(std::string_view name) const;
  /// Throws Error(UnknownState).
  StateIndex index_of(std::string_view name) const;

  void add_pair(Coalition label, StateIndex s, StateIndex t);
  bool related(Coalition label, StateIndex s, StateIndex t) const;
  const StateSet& successors(Coalition label, StateIndex s) const;

  /// Whether a `rel` line (or add_pair call) has touched this label.
  bool declared(Coalition label) const;
  void mark_declared(Coalition label);

  StateSet empty_set() const { return StateSet(size()); }
  StateSet full_set() const;

  friend bool operator==(const LabelledFrame& a, const LabelledFrame& b);

 private:
  std::size_t label_slot(Coalition label) const;

  int agents_;
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateIndex> index_;
  // relations_[mask][s] is the successor row of s under that label.
  std::vector<std::vector<StateSet>> relations_;
  std::vector<bool> declared_;
};

// ---------------------------------------------------------------- Dev laws

enum class DevLaw {
  D1Reflexive,
  D1Symmetric,
  D1Transitive,
  D2Identity,
  D3Inclusion,
  D4Forward,
  D4Reverse,
};

std::string_view to_string(DevLaw law);

/// One failing law instance: the law, its label (or label pair) and the
/// smallest offending state tuple under the declared state order.
///
/// Tuples: symmetric (s,t); transitive (s,u,t); identity (s,t);
/// inclusion (s,t) with labels (C,D), C a proper subset of D;
/// forward (s,u,t) with s E_C u E_D t but not s E_{C|D} t;
/// reverse (s,t) with s E_{C|D} t and no midpoint.
struct DevViolation {
  DevLaw law;
  Coalition label;
  std::optional<Coalition> second_label;
  std::vector<StateIndex> states;

  std::string describe(const LabelledFrame& frame) const;
  friend bool operator==(const DevViolation&, const DevViolation&) = default;
};

struct DevReport {
  bool passed = true;
  std::vector<DevViolation> violations;
};

/// Checks D1-D4. One violation is reported per (law, label) or
/// (law, label pair), ordered by law then label order.
DevReport check_dev_laws(const LabelledFrame& frame);

/// Returns the first state u (declared order) with u E_C s and u E_{N\C} t.
/// Throws NotDevFrame or NotConnected.
StateIndex rectangular_mixing_witness(const LabelledFrame& frame, StateIndex s, StateIndex t,
                                      Coalition c);

/// E_N classes, each sorted, ordered by first member.
std::vector<std::vector<StateIndex>> grand_components(const LabelledFrame& frame);

struct SeparationVerdict {
  bool separated = true;
  std::optional<std::pair<StateIndex, StateIndex>> counterexample;
};

/// Throws NotDevFrame, or InvalidArgument when `component` is not an E_N class.
SeparationVerdict coordinate_separation_check(const LabelledFrame& frame,
                                              std::span<const StateIndex> component);

/// Quotient coordinates M_i = X / E_{N\{i}} with classes ordered by first
/// member, and the embedding of each component state into their product.
struct ProductRepresentation {
  std::vector<StateIndex> component;
  std::vector<std::vector<std::vector<StateIndex>>> coordinate_sets;
  /// embedding[k] is the coordinate tuple of component[k].
  std::vector<std::vector<std::size_t>> embedding;

  const std::vector<std::size_t>& coordinates(StateIndex s) const;
};

/// Throws NotDevFrame or NotSeparated (message names the counterexample).
ProductRepresentation product_representation(const LabelledFrame& frame,
                                             std::span<const StateIndex> component);

/// Induced subframe; states keep their declared order. Throws UnknownState.
LabelledFrame restrict_frame(const LabelledFrame& frame, std::span<const StateIndex> survivors);
LabelledFrame restrict_frame(const LabelledFrame& frame, const std::vector<std::string>& survivors);

struct MissingMidpoint {
  StateIndex source;
  Coalition first;
  Coalition second;
  StateIndex target;
  friend bool operator==(const MissingMidpoint&, const MissingMidpoint&) = default;
};

struct FactorClosureVerdict {
  bool closed = true;
  std::optional<MissingMidpoint> missing;
};

/// Factor closure of a survivor set inside a Dev(N) frame. The first
/// missing quadruple is chosen by (source, target) in declared order, then
/// by (C, D) in label order. Throws NotDevFrame.
FactorClosureVerdict factor_closure_check(const LabelledFrame& frame,
                                          std::span<const StateIndex> survivors);

/// Same check without the Dev(N) precondition; used internally on frames
/// already known to be products.
FactorClosureVerdict factor_closure_unchecked(const LabelledFrame& frame,
                                              std::span<const StateIndex> survivors);

// ----------------------------------------------------------- FRAME format

/// Parses the line-based FRAME format. Throws SyntaxError (line numbers)
/// or Error(MalformedFrame).
LabelledFrame parse_frame(std::string_view text);

/// Emits the FRAME format; self-loops are omitted.
std::string print_frame(const LabelledFrame& frame);

bool is_valid_state_id(std::string_view id);

}  // namespace devaudit
