#include "devaudit/frame.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "devaudit/error.hpp"
#include "text.hpp"

namespace devaudit {

namespace {

constexpr std::size_t npos = StateSet::npos;

std::size_t first_bit(const StateSet& set) { return set.find_first(); }

std::size_t first_bit_other_than(const StateSet& set, std::size_t skip) {
  for (auto b = set.find_first(); b != npos; b = set.find_next(b)) {
    if (b != skip) return b;
  }
  return npos;
}

void require_dev(const LabelledFrame& frame) {
  const DevReport report = check_dev_laws(frame);
  if (!report.passed) {
    raise(ErrorCode::NotDevFrame,
          "frame violates " + report.violations.front().describe(frame));
  }
}

std::vector<StateIndex> sorted_unique(std::span<const StateIndex> states, std::size_t bound) {
  std::vector<StateIndex> out(states.begin(), states.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (StateIndex s : out) {
    if (s >= bound) raise(ErrorCode::UnknownState, "state index " + std::to_string(s) + " out of range");
  }
  return out;
}

void require_component(const LabelledFrame& frame, const std::vector<StateIndex>& component) {
  if (component.empty()) raise(ErrorCode::InvalidArgument, "component is empty");
  StateSet members = frame.empty_set();
  for (StateIndex s : component) members.set(s);
  const StateSet& cls = frame.successors(frame.grand(), component.front());
  if (cls != members) {
    raise(ErrorCode::InvalidArgument, "state set is not an E_N component");
  }
}

}  // namespace

// ------------------------------------------------------------ LabelledFrame

LabelledFrame::LabelledFrame(int agents, std::vector<std::string> states)
    : agents_(agents), states_(std::move(states)) {
  check_agent_count(agents);
  for (StateIndex i = 0; i < states_.size(); ++i) {
    if (!index_.emplace(states_[i], i).second) {
      raise(ErrorCode::MalformedFrame, "duplicate state '" + states_[i] + "'");
    }
  }
  const std::size_t labels = std::size_t{1} << agents_;
  relations_.resize(labels);
  for (auto& rows : relations_) {
    rows.assign(states_.size(), StateSet(states_.size()));
    for (StateIndex s = 0; s < states_.size(); ++s) rows[s].set(s);
  }
  declared_.assign(labels, false);
  declared_[0] = true;
}

std::optional<StateIndex> LabelledFrame::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateIndex LabelledFrame::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  raise(ErrorCode::UnknownState, "unknown state '" + std::string(name) + "'");
}

std::size_t LabelledFrame::label_slot(Coalition label) const {
  if (!label.subset_of(grand())) {
    raise(ErrorCode::OutOfRangeAgent, "label " + label.to_string() + " outside agent set");
  }
  return label.mask();
}

void LabelledFrame::add_pair(Coalition label, StateIndex s, StateIndex t) {
  if (s >= size() || t >= size()) raise(ErrorCode::UnknownState, "pair references unknown state");
  const std::size_t slot = label_slot(label);
  relations_[slot][s].set(t);
  declared_[slot] = true;
}

bool LabelledFrame::related(Coalition label, StateIndex s, StateIndex t) const {
  return relations_[label_slot(label)].at(s).test(t);
}

const StateSet& LabelledFrame::successors(Coalition label, StateIndex s) const {
  return relations_[label_slot(label)].at(s);
}

bool LabelledFrame::declared(Coalition label) const { return declared_[label_slot(label)]; }

void LabelledFrame::mark_declared(Coalition label) { declared_[label_slot(label)] = true; }

StateSet LabelledFrame::full_set() const {
  StateSet all(size());
  all.set();
  return all;
}

bool operator==(const LabelledFrame& a, const LabelledFrame& b) {
  return a.agents_ == b.agents_ && a.states_ == b.states_ && a.relations_ == b.relations_;
}

// ----------------------------------------------------------------- Dev laws

std::string_view to_string(DevLaw law) {
  switch (law) {
    case DevLaw::D1Reflexive: return "D1-reflexive";
    case DevLaw::D1Symmetric: return "D1-symmetric";
    case DevLaw::D1Transitive: return "D1-transitive";
    case DevLaw::D2Identity: return "D2-identity";
    case DevLaw::D3Inclusion: return "D3-inclusion";
    case DevLaw::D4Forward: return "D4-forward";
    case DevLaw::D4Reverse: return "D4-reverse";
  }
  return "?";
}

std::string DevViolation::describe(const LabelledFrame& frame) const {
  std::string out(to_string(law));
  out += ' ';
  out += label.to_string();
  if (second_label) out += ' ' + second_label->to_string();
  out += " (";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ',';
    out += frame.name(states[i]);
  }
  out += ')';
  return out;
}

DevReport check_dev_laws(const LabelledFrame& frame) {
  DevReport report;
  const auto labels = all_labels(frame.agents());
  const std::size_t p = frame.size();
  auto& out = report.violations;

  for (Coalition c : labels) {
    for (StateIndex s = 0; s < p; ++s) {
      const StateSet& row = frame.successors(c, s);
      bool found = false;
      for (auto t = row.find_first(); t != npos; t = row.find_next(t)) {
        if (!frame.related(c, t, s)) {
          out.push_back({DevLaw::D1Symmetric, c, std::nullopt, {s, t}});
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }

  for (Coalition c : labels) {
    bool found = false;
    for (StateIndex s = 0; s < p && !found; ++s) {
      const StateSet& row = frame.successors(c, s);
      for (auto u = row.find_first(); u != npos; u = row.find_next(u)) {
        const StateSet escape = frame.successors(c, u) - row;
        if (const auto t = first_bit(escape); t != npos) {
          out.push_back({DevLaw::D1Transitive, c, std::nullopt, {s, u, t}});
          found = true;
          break;
        }
      }
    }
  }

  const Coalition none;
  for (StateIndex s = 0; s < p; ++s) {
    if (const auto t = first_bit_other_than(frame.successors(none, s), s); t != npos) {
      out.push_back({DevLaw::D2Identity, none, std::nullopt, {s, t}});
      break;
    }
  }

  for (Coalition c : labels) {
    for (Coalition d : labels) {
      if (c == d || !c.subset_of(d)) continue;
      for (StateIndex s = 0; s < p; ++s) {
        const StateSet missing = frame.successors(c, s) - frame.successors(d, s);
        if (const auto t = first_bit(missing); t != npos) {
          out.push_back({DevLaw::D3Inclusion, c, d, {s, t}});
          break;
        }
      }
    }
  }

  std::vector<DevViolation> reverse;
  for (Coalition c : labels) {
    for (Coalition d : labels) {
      const Coalition cd = c | d;
      bool forward_found = false;
      bool reverse_found = false;
      for (StateIndex s = 0; s < p && !(forward_found && reverse_found); ++s) {
        const StateSet& first = frame.successors(c, s);
        const StateSet& target = frame.successors(cd, s);
        StateSet composite(p);
        for (auto u = first.find_first(); u != npos; u = first.find_next(u)) {
          const StateSet& second = frame.successors(d, u);
          if (!forward_found) {
            if (const auto t = first_bit(second - target); t != npos) {
              out.push_back({DevLaw::D4Forward, c, d, {s, u, t}});
              forward_found = true;
            }
          }
          composite |= second;
        }
        if (!reverse_found) {
          if (const auto t = first_bit(target - composite); t != npos) {
            reverse.push_back({DevLaw::D4Reverse, c, d, {s, t}});
            reverse_found = true;
          }
        }
      }
    }
  }
  out.insert(out.end(), reverse.begin(), reverse.end());
  report.passed = out.empty();
  return report;
}

StateIndex rectangular_mixing_witness(const LabelledFrame& frame, StateIndex s, StateIndex t,
                                      Coalition c) {
  if (s >= frame.size() || t >= frame.size()) raise(ErrorCode::UnknownState, "state out of range");
  require_dev(frame);
  const Coalition n = frame.grand();
  if (!c.subset_of(n)) raise(ErrorCode::OutOfRangeAgent, "coalition outside agent set");
  if (!frame.related(n, s, t)) {
    raise(ErrorCode::NotConnected, frame.name(s) + " and " + frame.name(t) + " are not E_N-related");
  }
  // u E_C s and u E_{N\C} t; rows are symmetric in a Dev frame.
  const StateSet candidates = frame.successors(c, s) & frame.successors(c.complement(frame.agents()), t);
  const auto u = first_bit(candidates);
  if (u == npos) raise(ErrorCode::NotDevFrame, "no mixing witness although Dev(N) laws hold");
  return u;
}

std::vector<std::vector<StateIndex>> grand_components(const LabelledFrame& frame) {
  std::vector<std::vector<StateIndex>> out;
  StateSet seen = frame.empty_set();
  const Coalition n = frame.grand();
  for (StateIndex s = 0; s < frame.size(); ++s) {
    if (seen.test(s)) continue;
    StateSet cls = frame.empty_set();
    std::vector<StateIndex> stack{s};
    cls.set(s);
    while (!stack.empty()) {
      const StateIndex u = stack.back();
      stack.pop_back();
      for (StateIndex v = 0; v < frame.size(); ++v) {
        if (!cls.test(v) && (frame.related(n, u, v) || frame.related(n, v, u))) {
          cls.set(v);
          stack.push_back(v);
        }
      }
    }
    seen |= cls;
    std::vector<StateIndex> members;
    for (auto b = cls.find_first(); b != npos; b = cls.find_next(b)) members.push_back(b);
    out.push_back(std::move(members));
  }
  return out;
}

SeparationVerdict coordinate_separation_check(const LabelledFrame& frame,
                                              std::span<const StateIndex> component) {
  const auto members = sorted_unique(component, frame.size());
  require_dev(frame);
  require_component(frame, members);
  const int n = frame.agents();
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      bool all = true;
      for (int i = 1; i <= n && all; ++i) {
        all = frame.related(Coalition::singleton(i).complement(n), members[a], members[b]);
      }
      if (all) return {false, std::make_pair(members[a], members[b])};
    }
  }
  return {};
}

const std::vector<std::size_t>& ProductRepresentation::coordinates(StateIndex s) const {
  const auto it = std::find(component.begin(), component.end(), s);
  if (it == component.end()) raise(ErrorCode::UnknownState, "state not in component");
  return embedding[static_cast<std::size_t>(it - component.begin())];
}

ProductRepresentation product_representation(const LabelledFrame& frame,
                                             std::span<const StateIndex> component) {
  const auto members = sorted_unique(component, frame.size());
  const SeparationVerdict sep = coordinate_separation_check(frame, members);
  if (!sep.separated) {
    raise(ErrorCode::NotSeparated, "coordinate separation fails at (" +
                                       frame.name(sep.counterexample->first) + "," +
                                       frame.name(sep.counterexample->second) + ")");
  }
  const int n = frame.agents();
  ProductRepresentation rep;
  rep.component = members;
  rep.coordinate_sets.resize(static_cast<std::size_t>(n));
  rep.embedding.assign(members.size(), std::vector<std::size_t>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i) {
    const Coalition others = Coalition::singleton(i).complement(n);
    auto& classes = rep.coordinate_sets[static_cast<std::size_t>(i - 1)];
    for (std::size_t k = 0; k < members.size(); ++k) {
      std::size_t cls = classes.size();
      for (std::size_t j = 0; j < classes.size(); ++j) {
        if (frame.related(others, classes[j].front(), members[k])) {
          cls = j;
          break;
        }
      }
      if (cls == classes.size()) classes.emplace_back();
      classes[cls].push_back(members[k]);
      rep.embedding[k][static_cast<std::size_t>(i - 1)] = cls;
    }
  }

  // Post-verification: bijection onto the product, and s E_C t iff the
  // coordinates agree outside C.
  std::size_t product = 1;
  for (const auto& classes : rep.coordinate_sets) product *= classes.size();
  std::set<std::vector<std::size_t>> images(rep.embedding.begin(), rep.embedding.end());
  if (images.size() != members.size() || product != members.size()) {
    throw std::logic_error("product representation is not a bijection");
  }
  for (Coalition c : all_labels(n)) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = 0; b < members.size(); ++b) {
        bool agree = true;
        for (int i = 1; i <= n; ++i) {
          if (!c.contains(i) && rep.embedding[a][i - 1] != rep.embedding[b][i - 1]) agree = false;
        }
        if (agree != frame.related(c, members[a], members[b])) {
          throw std::logic_error("product representation does not preserve relations");
        }
      }
    }
  }
  return rep;
}

LabelledFrame restrict_frame(const LabelledFrame& frame, std::span<const StateIndex> survivors) {
  const auto kept = sorted_unique(survivors, frame.size());
  std::vector<std::string> names;
  names.reserve(kept.size());
  for (StateIndex s : kept) names.push_back(frame.name(s));
  LabelledFrame out(frame.agents(), std::move(names));
  for (Coalition c : all_labels(frame.agents())) {
    if (frame.declared(c)) out.mark_declared(c);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = 0; j < kept.size(); ++j) {
        if (i != j && frame.related(c, kept[i], kept[j])) out.add_pair(c, i, j);
      }
    }
  }
  return out;
}

LabelledFrame restrict_frame(const LabelledFrame& frame, const std::vector<std::string>& survivors) {
  std::vector<StateIndex> idx;
  idx.reserve(survivors.size());
  for (const auto& s : survivors) idx.push_back(frame.index_of(s));
  return restrict_frame(frame, std::span<const StateIndex>(idx));
}

FactorClosureVerdict factor_closure_unchecked(const LabelledFrame& frame,
                                              std::span<const StateIndex> survivors) {
  const auto kept = sorted_unique(survivors, frame.size());
  StateSet alive = frame.empty_set();
  for (StateIndex s : kept) alive.set(s);
  const auto labels = all_labels(frame.agents());
  for (StateIndex s : kept) {
    for (StateIndex t : kept) {
      for (Coalition c : labels) {
        const StateSet first = frame.successors(c, s) & alive;
        for (Coalition d : labels) {
          if (!frame.related(c | d, s, t)) continue;
          // Midpoints u with u E_D t; E_D is symmetric so its row at t serves.
          if (!first.intersects(frame.successors(d, t))) {
            return {false, MissingMidpoint{s, c, d, t}};
          }
        }
      }
    }
  }
  return {};
}

FactorClosureVerdict factor_closure_check(const LabelledFrame& frame,
                                          std::span<const StateIndex> survivors) {
  require_dev(frame);
  return factor_closure_unchecked(frame, survivors);
}

// --------------------------------------------------------------- FRAME text

bool is_valid_state_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '-';
  });
}

std::vector<std::pair<std::string, std::string>> text::parse_pairs(std::string_view s, std::size_t line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto ident = [&]() -> std::string {
    skip();
    const std::size_t start = i;
    while (i < s.size() && s[i] != ',' && s[i] != ')' && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::string id(s.substr(start, i - start));
    if (!is_valid_state_id(id)) throw SyntaxError(line, true, "invalid state id '" + id + "'");
    skip();
    return id;
  };
  while (true) {
    skip();
    if (i >= s.size()) break;
    if (s[i] != '(') throw SyntaxError(line, true, "expected '(' in pair list");
    ++i;
    std::string a = ident();
    if (i >= s.size() || s[i] != ',') throw SyntaxError(line, true, "expected ',' in pair");
    ++i;
    std::string b = ident();
    if (i >= s.size() || s[i] != ')') throw SyntaxError(line, true, "expected ')' in pair");
    ++i;
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}


LabelledFrame parse_frame(std::string_view text) {
  std::optional<int> agents;
  std::optional<LabelledFrame> frame;
  std::set<std::uint32_t> seen_labels;
  for (const auto& [number, line] : text::content_lines(text)) {
    std::string_view rest;
    if (text::take_key(line, "agents", rest)) {
      if (agents) throw SyntaxError(number, true, "duplicate 'agents:' line");
      try {
        std::size_t used = 0;
        const int n = std::stoi(std::string(rest), &used);
        if (used != rest.size()) throw SyntaxError(number, true, "invalid agent count");
        agents = n;
      } catch (const std::logic_error&) {
        throw SyntaxError(number, true, "invalid agent count");
      }
      check_agent_count(*agents);
    } else if (text::take_key(line, "states", rest)) {
      if (!agents) throw SyntaxError(number, true, "'states:' before 'agents:'");
      if (frame) throw SyntaxError(number, true, "duplicate 'states:' line");
      std::vector<std::string> names;
      for (auto tok : text::split_ws(rest)) {
        if (!is_valid_state_id(tok)) throw SyntaxError(number, true, "invalid state id '" + std::string(tok) + "'");
        names.emplace_back(tok);
      }
      frame.emplace(*agents, std::move(names));
    } else if (text::starts_with(line, "rel")) {
      if (!frame) throw SyntaxError(number, true, "'rel' line before 'states:'");
      const auto colon = line.find(':');
      const auto close = line.find('}');
      if (colon == std::string_view::npos || close == std::string_view::npos || close > colon) {
        throw SyntaxError(number, true, "expected 'rel {..}: pairs'");
      }
      Coalition label;
      try {
        label = parse_coalition(line.substr(3, close - 2), *agents);
      } catch (const SyntaxError& e) {
        throw SyntaxError(number, true, std::string("bad coalition label: ") + e.what());
      }
      if (text::trim(line.substr(close + 1, colon - close - 1)) != "") {
        throw SyntaxError(number, true, "unexpected text between label and ':'");
      }
      if (label.empty()) raise(ErrorCode::MalformedFrame, "line " + std::to_string(number) + ": 'rel {}:' is forbidden (identity implied)");
      if (!seen_labels.insert(label.mask()).second) {
        raise(ErrorCode::MalformedFrame, "line " + std::to_string(number) + ": duplicate label " + label.to_string());
      }
      frame->mark_declared(label);
      for (const auto& [a, b] : text::parse_pairs(line.substr(colon + 1), number)) {
        const auto s = frame->find(a);
        const auto t = frame->find(b);
        if (!s || !t) {
          raise(ErrorCode::MalformedFrame, "line " + std::to_string(number) + ": pair (" + a + "," + b +
                                               ") references an unknown state");
        }
        frame->add_pair(label, *s, *t);
      }
    } else {
      throw SyntaxError(number, true, "unknown line '" + std::string(line) + "'");
    }
  }
  if (!agents) throw SyntaxError(0, true, "missing 'agents:' line");
  if (!frame) throw SyntaxError(0, true, "missing 'states:' line");
  for (Coalition c : all_labels(*agents)) {
    if (!c.empty() && !frame->declared(c)) {
      raise(ErrorCode::MalformedFrame, "missing 'rel " + c.to_string() + ":' line");
    }
  }
  return std::move(*frame);
}

std::string print_frame(const LabelledFrame& frame) {
  std::ostringstream out;
  out << "agents: " << frame.agents() << '\n';
  out << "states:";
  for (const auto& s : frame.states()) out << ' ' << s;
  out << '\n';
  for (Coalition c : all_labels(frame.agents())) {
    if (c.empty()) continue;
    out << "rel " << c.to_string() << ':';
    for (StateIndex s = 0; s < frame.size(); ++s) {
      const StateSet& row = frame.successors(c, s);
      for (auto t = row.find_first(); t != npos; t = row.find_next(t)) {
        if (t != s) out << " (" << frame.name(s) << ',' << frame.name(t) << ')';
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace devaudit
