#include "devaudit/certificate.hpp"

#include <set>
#include <unordered_map>

#include "devaudit/error.hpp"
#include "text.hpp"

namespace devaudit {

std::optional<std::size_t> Certificate::closure_index(const Formula& f) const {
  for (std::size_t k = 0; k < closure.size(); ++k) {
    if (closure[k] == f) return k;
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ parsing

namespace {

[[noreturn]] void dangling(std::size_t line, const std::string& what) {
  raise(ErrorCode::DanglingReference, "line " + std::to_string(line) + ": " + what);
}

class CertParser {
 public:
  explicit CertParser(std::string_view input) : lines_(text::content_lines(input)) {}

  Certificate run() {
    // Header keys first, so later rows can be resolved whatever their order.
    for (const auto& line : lines_) {
      std::string_view rest;
      if (text::take_key(line.content, "states", rest)) {
        once(seen_states_, line, "states");
        for (auto tok : text::split_ws(rest)) {
          if (!is_valid_state_id(tok)) throw SyntaxError(line.number, true, "invalid state id '" + std::string(tok) + "'");
          if (!index_.emplace(std::string(tok), cert_.states.size()).second) {
            throw SyntaxError(line.number, true, "duplicate state '" + std::string(tok) + "'");
          }
          cert_.states.emplace_back(tok);
        }
        if (cert_.states.empty()) throw SyntaxError(line.number, true, "no states declared");
      } else if (text::take_key(line.content, "labels", rest)) {
        once(seen_labels_, line, "labels");
        parse_labels(line, rest);
      }
    }
    if (!seen_states_) throw SyntaxError(0, true, "missing 'states:'");
    if (!seen_labels_) throw SyntaxError(0, true, "missing 'labels:'");
    context_.agents = cert_.agents;

    for (const auto& line : lines_) {
      std::string_view rest;
      if (text::take_key(line.content, "states", rest) || text::take_key(line.content, "labels", rest)) continue;
      if (text::take_key(line.content, "root", rest)) {
        once(seen_root_, line, "root");
        cert_.root = state(line, rest);
      } else if (text::take_key(line.content, "formula", rest)) {
        once(seen_formula_, line, "formula");
        cert_.formula = whole_formula(line, rest);
      } else if (text::take_key(line.content, "closure", rest)) {
        once(seen_closure_, line, "closure");
        for (const auto& f : formula_list(line, rest, ';')) {
          if (!cert_.closure_index(f)) cert_.closure.push_back(f);
        }
      } else if (text::starts_with(line.content, "relations")) {
        relation_lines_.push_back(line);
      } else if (text::take_key(line.content, "types", rest)) {
        type_lines_.push_back(line);
      } else if (text::take_key(line.content, "diamonds", rest)) {
        diamond_lines_.push_back(line);
      } else if (text::take_key(line.content, "factors", rest)) {
        factor_lines_.push_back(line);
      } else {
        throw SyntaxError(line.number, true, "unknown key in '" + std::string(line.content) + "'");
      }
    }
    if (!seen_root_) throw SyntaxError(0, true, "missing 'root:'");
    if (!seen_formula_) throw SyntaxError(0, true, "missing 'formula:'");
    if (!seen_closure_) throw SyntaxError(0, true, "missing 'closure:'");
    if (!cert_.closure_index(cert_.formula)) raise(ErrorCode::DanglingReference, "root formula is not in the closure");

    for (const auto& line : relation_lines_) parse_relation(line);
    for (const auto& label : cert_.labels) {
      auto& pairs = cert_.relations[label.mask()];
      for (std::size_t s = 0; s < cert_.states.size(); ++s) pairs.emplace_back(s, s);
    }
    cert_.types.assign(cert_.states.size(), std::vector<bool>(cert_.closure.size(), false));
    std::vector<bool> typed(cert_.states.size(), false);
    for (const auto& line : type_lines_) parse_type(line, typed);
    for (const auto& line : diamond_lines_) parse_diamond(line);
    for (const auto& line : factor_lines_) parse_factor(line);
    return std::move(cert_);
  }

 private:
  void once(bool& flag, const text::Line& line, const char* key) {
    if (flag) throw SyntaxError(line.number, true, std::string("duplicate '") + key + ":'");
    flag = true;
  }

  std::size_t state(const text::Line& line, std::string_view name) {
    name = text::trim(name);
    auto it = index_.find(std::string(name));
    if (it == index_.end()) dangling(line.number, "undeclared state '" + std::string(name) + "'");
    return it->second;
  }

  Coalition coalition(const text::Line& line, std::string_view s) {
    try {
      return parse_coalition(s, kMaxAgents);
    } catch (const Error& e) {
      throw SyntaxError(line.number, true, std::string("bad coalition: ") + e.what());
    }
  }

  void parse_labels(const text::Line& line, std::string_view rest) {
    std::size_t i = 0;
    std::set<std::uint32_t> masks;
    while (true) {
      while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
      if (i >= rest.size()) break;
      const auto close = rest.find('}', i);
      if (rest[i] != '{' || close == std::string_view::npos) throw SyntaxError(line.number, true, "expected '{..}' label");
      const Coalition c = coalition(line, rest.substr(i, close + 1 - i));
      if (!masks.insert(c.mask()).second) throw SyntaxError(line.number, true, "duplicate label " + c.to_string());
      cert_.labels.push_back(c);
      cert_.agents = std::max(cert_.agents, c.max_agent());
      i = close + 1;
    }
    if (cert_.agents == 0) throw SyntaxError(line.number, true, "labels name no agents");
    for (Coalition c : all_labels(cert_.agents)) {
      if (!masks.count(c.mask())) throw SyntaxError(line.number, true, "label " + c.to_string() + " missing from 'labels:'");
    }
  }

  Formula whole_formula(const text::Line& line, std::string_view s) {
    const auto list = formula_list(line, s, '\0');
    if (list.size() != 1) throw SyntaxError(line.number, true, "expected a single formula");
    return list.front();
  }

  // Formulas separated by `sep` (none when '\0'); may be empty for types.
  std::vector<Formula> formula_list(const text::Line& line, std::string_view s, char sep) {
    std::vector<Formula> out;
    std::size_t i = 0;
    auto skip = [&] {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    skip();
    if (i >= s.size()) return out;
    while (true) {
      try {
        auto [f, next] = parse_formula_prefix(s, i, context_);
        out.push_back(std::move(f));
        i = next;
      } catch (const SyntaxError& e) {
        throw SyntaxError(line.number, true, std::string("formula: ") + e.what());
      } catch (const Error& e) {
        throw SyntaxError(line.number, true, std::string("formula: ") + e.what());
      }
      skip();
      if (i >= s.size()) break;
      if (sep == '\0' || s[i] != sep) throw SyntaxError(line.number, true, "unexpected text after formula");
      ++i;
      skip();
    }
    return out;
  }

  void parse_relation(const text::Line& line) {
    auto body = text::trim(line.content.substr(9));
    const auto close = body.find('}');
    if (body.empty() || body[0] != '{' || close == std::string_view::npos) {
      throw SyntaxError(line.number, true, "expected 'relations {..}: pairs'");
    }
    const Coalition c = coalition(line, body.substr(0, close + 1));
    auto rest = text::trim(body.substr(close + 1));
    if (rest.empty() || rest[0] != ':') throw SyntaxError(line.number, true, "expected ':' after the label");
    if (c.max_agent() > cert_.agents) dangling(line.number, "label " + c.to_string() + " is not declared");
    if (!relation_labels_.insert(c.mask()).second) throw SyntaxError(line.number, true, "duplicate relation line");
    auto& pairs = cert_.relations[c.mask()];
    for (const auto& [a, b] : text::parse_pairs(rest.substr(1), line.number)) {
      pairs.emplace_back(state(line, a), state(line, b));
    }
  }

  void parse_type(const text::Line& line, std::vector<bool>& typed) {
    std::string_view rest;
    text::take_key(line.content, "types", rest);
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos) throw SyntaxError(line.number, true, "expected 'types: <state> = formulas'");
    const auto s = state(line, rest.substr(0, eq));
    if (typed[s]) throw SyntaxError(line.number, true, "duplicate types line for '" + cert_.states[s] + "'");
    typed[s] = true;
    for (const auto& f : formula_list(line, rest.substr(eq + 1), ',')) {
      const auto k = cert_.closure_index(f);
      if (!k) dangling(line.number, "formula " + f.text() + " is not in the closure");
      cert_.types[s][*k] = true;
    }
  }

  void parse_diamond(const text::Line& line) {
    std::string_view rest;
    text::take_key(line.content, "diamonds", rest);
    const auto words = text::split_ws(rest);
    if (words.empty()) throw SyntaxError(line.number, true, "expected 'diamonds: <state> <phi> -> <state>'");
    const auto s = state(line, words[0]);
    const auto after = static_cast<std::size_t>(words[0].data() + words[0].size() - rest.data());
    const auto arrow = rest.rfind("->");
    if (arrow == std::string_view::npos || arrow < after) throw SyntaxError(line.number, true, "diamond pointer without '->'");
    const Formula f = whole_formula(line, rest.substr(after, arrow - after));
    if (f.kind() != FormulaKind::Diamond) throw SyntaxError(line.number, true, "pointer formula is not a diamond");
    if (!cert_.closure_index(f)) dangling(line.number, "formula " + f.text() + " is not in the closure");
    const auto t = state(line, rest.substr(arrow + 2));
    cert_.diamonds.push_back({s, f, t, line.number});
  }

  void parse_factor(const text::Line& line) {
    std::string_view rest;
    text::take_key(line.content, "factors", rest);
    const auto first_open = rest.find('{');
    const auto first_close = rest.find('}', first_open);
    const auto second_open = rest.find('{', first_close);
    const auto second_close = rest.find('}', second_open);
    const auto arrow = rest.find("->", second_close);
    if (first_open == std::string_view::npos || first_close == std::string_view::npos ||
        second_open == std::string_view::npos || second_close == std::string_view::npos ||
        arrow == std::string_view::npos || !text::trim(rest.substr(first_close + 1, second_open - first_close - 1)).empty()) {
      throw SyntaxError(line.number, true, "expected 'factors: <s> {C}{D} <t> -> <u>'");
    }
    Certificate::FactorPointer fp{};
    fp.source = state(line, rest.substr(0, first_open));
    fp.first = coalition(line, rest.substr(first_open, first_close + 1 - first_open));
    fp.second = coalition(line, rest.substr(second_open, second_close + 1 - second_open));
    if (fp.first.max_agent() > cert_.agents || fp.second.max_agent() > cert_.agents) {
      dangling(line.number, "factor pointer names an undeclared label");
    }
    fp.target = state(line, rest.substr(second_close + 1, arrow - second_close - 1));
    fp.midpoint = state(line, rest.substr(arrow + 2));
    fp.line = line.number;
    cert_.factors.push_back(fp);
  }

  std::vector<text::Line> lines_;
  Certificate cert_;
  FormulaContext context_;
  std::unordered_map<std::string, std::size_t> index_;
  std::set<std::uint32_t> relation_labels_;
  std::vector<text::Line> relation_lines_, type_lines_, diamond_lines_, factor_lines_;
  bool seen_states_ = false, seen_labels_ = false, seen_root_ = false, seen_formula_ = false, seen_closure_ = false;
};

}  // namespace

Certificate parse_certificate(std::string_view input) { return CertParser(input).run(); }

// ------------------------------------------------------------- verification

namespace {

class Verifier {
 public:
  explicit Verifier(const Certificate& cert) : cert_(cert), k_(cert.states.size()) {
    const auto labels = all_labels(cert.agents);
    rows_.resize(std::size_t{1} << cert.agents);
    for (Coalition c : labels) {
      auto& rel = rows_[c.mask()];
      rel.assign(k_, StateSet(k_));
      if (auto it = cert.relations.find(c.mask()); it != cert.relations.end()) {
        for (const auto& [s, t] : it->second) rel[s].set(t);
      }
    }
  }

  VerifyResult run() {
    if (auto f = type_rows()) return reject(*f);
    if (auto f = equivalence_rows()) return reject(*f);
    if (auto f = identity_and_inclusion_rows()) return reject(*f);
    if (auto f = union_rows()) return reject(*f);
    if (auto f = modal_rows(FormulaKind::Box)) return reject(*f);
    if (auto f = modal_rows(FormulaKind::Diamond)) return reject(*f);
    if (auto f = pointer_rows()) return reject(*f);
    const auto root_index = *cert_.closure_index(cert_.formula);
    if (!cert_.types[cert_.root][root_index]) {
      return reject({"root-row", "state " + name(cert_.root), "root formula " + cert_.formula.text() + " not in its type"});
    }
    return VerifyResult{true, std::nullopt};
  }

 private:
  static VerifyResult reject(CertificateFailure f) { return VerifyResult{false, std::move(f)}; }
  const std::string& name(std::size_t s) const { return cert_.states[s]; }
  const StateSet& row(Coalition c, std::size_t s) const { return rows_[c.mask()][s]; }

  std::optional<bool> claimed(std::size_t t, const Formula& f) const {
    const auto k = cert_.closure_index(f);
    if (!k) return std::nullopt;
    return cert_.types[t][*k];
  }

  std::optional<CertificateFailure> type_rows() const {
    for (std::size_t t = 0; t < k_; ++t) {
      for (std::size_t k = 0; k < cert_.closure.size(); ++k) {
        const Formula& chi = cert_.closure[k];
        if (chi.is_atom() || chi.is_modal()) continue;
        const bool have = cert_.types[t][k];
        const auto where = "state " + name(t) + ", formula " + chi.text();
        if (chi.kind() == FormulaKind::Not) {
          const auto inner = claimed(t, chi.operand());
          if (!inner) return CertificateFailure{"type-row", where, "MissingOperand: " + chi.operand().text() + " not in closure"};
          if (have == *inner) return CertificateFailure{"type-row", where, "negation and operand must have opposite membership"};
          continue;
        }
        const auto a = claimed(t, chi.lhs());
        const auto b = claimed(t, chi.rhs());
        if (!a || !b) {
          const auto& missing = !a ? chi.lhs() : chi.rhs();
          return CertificateFailure{"type-row", where, "MissingOperand: " + missing.text() + " not in closure"};
        }
        bool expect = false;
        switch (chi.kind()) {
          case FormulaKind::And: expect = *a && *b; break;
          case FormulaKind::Or: expect = *a || *b; break;
          case FormulaKind::Implies: expect = !*a || *b; break;
          default: break;
        }
        if (have != expect) return CertificateFailure{"type-row", where, "membership contradicts the Boolean structure"};
      }
    }
    return std::nullopt;
  }

  std::optional<CertificateFailure> equivalence_rows() const {
    for (Coalition c : all_labels(cert_.agents)) {
      for (std::size_t s = 0; s < k_; ++s) {
        for (auto t = row(c, s).find_first(); t != StateSet::npos; t = row(c, s).find_next(t)) {
          if (!row(c, t).test(s)) {
            return CertificateFailure{"frame-row", "R" + c.to_string() + " (" + name(s) + "," + name(t) + ")", "not symmetric"};
          }
          if (!row(c, t).is_subset_of(row(c, s))) {
            const auto u = (row(c, t) - row(c, s)).find_first();
            return CertificateFailure{"frame-row", "R" + c.to_string() + " (" + name(s) + "," + name(t) + "," + name(u) + ")",
                                      "not transitive"};
          }
        }
      }
    }
    return std::nullopt;
  }

  std::optional<CertificateFailure> identity_and_inclusion_rows() const {
    const Coalition none;
    for (std::size_t s = 0; s < k_; ++s) {
      if (row(none, s).count() != 1) {
        const auto t = (row(none, s).find_first() == s) ? row(none, s).find_next(s) : row(none, s).find_first();
        return CertificateFailure{"frame-row", "R{} (" + name(s) + "," + name(t) + ")", "empty label is not the identity"};
      }
    }
    const auto labels = all_labels(cert_.agents);
    for (Coalition c : labels) {
      for (Coalition d : labels) {
        if (c == d || !c.subset_of(d)) continue;
        for (std::size_t s = 0; s < k_; ++s) {
          if (!row(c, s).is_subset_of(row(d, s))) {
            const auto t = (row(c, s) - row(d, s)).find_first();
            return CertificateFailure{"frame-row", "R" + c.to_string() + " in R" + d.to_string() + " (" + name(s) + "," + name(t) + ")",
                                      "inclusion fails"};
          }
        }
      }
    }
    return std::nullopt;
  }

  std::optional<CertificateFailure> union_rows() const {
    const auto labels = all_labels(cert_.agents);
    for (Coalition c : labels) {
      for (Coalition d : labels) {
        const Coalition cd = c | d;
        for (std::size_t t = 0; t < k_; ++t) {
          StateSet composite(k_);
          for (auto u = row(c, t).find_first(); u != StateSet::npos; u = row(c, t).find_next(u)) composite |= row(d, u);
          if (composite == row(cd, t)) continue;
          const auto where = [&](std::size_t v) {
            return "R" + c.to_string() + ";R" + d.to_string() + " vs R" + cd.to_string() + " (" + name(t) + "," + name(v) + ")";
          };
          if (!composite.is_subset_of(row(cd, t))) {
            return CertificateFailure{"union-row", where((composite - row(cd, t)).find_first()),
                                      "composite pair missing from the union relation"};
          }
          return CertificateFailure{"union-row", where((row(cd, t) - composite).find_first()),
                                    "union pair has no midpoint"};
        }
      }
    }
    return std::nullopt;
  }

  std::optional<CertificateFailure> modal_rows(FormulaKind kind) const {
    const std::string row_kind = kind == FormulaKind::Box ? "box-row" : "diamond-row";
    for (std::size_t k = 0; k < cert_.closure.size(); ++k) {
      const Formula& chi = cert_.closure[k];
      if (chi.kind() != kind) continue;
      const auto inner = cert_.closure_index(chi.operand());
      if (!inner) {
        return CertificateFailure{row_kind, "formula " + chi.text(), "MissingOperand: " + chi.operand().text() + " not in closure"};
      }
      for (std::size_t t = 0; t < k_; ++t) {
        const auto& succ = row(chi.coalition(), t);
        bool any = false;
        bool all = true;
        for (auto u = succ.find_first(); u != StateSet::npos; u = succ.find_next(u)) {
          const bool in = cert_.types[u][*inner];
          any = any || in;
          all = all && in;
        }
        const bool truth = kind == FormulaKind::Box ? all : any;
        if (truth != cert_.types[t][k]) {
          return CertificateFailure{row_kind, "state " + name(t) + ", formula " + chi.text(),
                                    truth ? "true but not claimed" : "claimed but false over the successors"};
        }
      }
    }
    return std::nullopt;
  }

  std::optional<CertificateFailure> pointer_rows() const {
    for (const auto& p : cert_.diamonds) {
      const auto where = "line " + std::to_string(p.line);
      if (!*claimed(p.state, p.formula)) {
        return CertificateFailure{"pointer-row", where, "pointer for a diamond not claimed at " + name(p.state)};
      }
      if (!row(p.formula.coalition(), p.state).test(p.target)) {
        return CertificateFailure{"pointer-row", where, name(p.target) + " is not an R" + p.formula.coalition().to_string() + "-successor"};
      }
      const auto inner = claimed(p.target, p.formula.operand());
      if (!inner || !*inner) {
        return CertificateFailure{"pointer-row", where, p.formula.operand().text() + " not in the type of " + name(p.target)};
      }
    }
    for (const auto& p : cert_.factors) {
      const auto where = "line " + std::to_string(p.line);
      if (!row(p.first | p.second, p.source).test(p.target)) {
        return CertificateFailure{"pointer-row", where, "endpoints are not related by the union label"};
      }
      if (!row(p.first, p.source).test(p.midpoint) || !row(p.second, p.midpoint).test(p.target)) {
        return CertificateFailure{"pointer-row", where, "midpoint does not factor the edge"};
      }
    }
    return std::nullopt;
  }

  const Certificate& cert_;
  std::size_t k_;
  std::vector<std::vector<StateSet>> rows_;  // by label mask
};

}  // namespace

VerifyResult verify_certificate(const Certificate& cert) { return Verifier(cert).run(); }

ExplicitModel certificate_model(const Certificate& cert) {
  LabelledFrame frame(cert.agents, cert.states);
  for (const auto& [mask, pairs] : cert.relations) {
    const auto c = Coalition::from_mask(mask);
    if (!c.empty()) frame.mark_declared(c);
    for (const auto& [s, t] : pairs) frame.add_pair(c, s, t);
  }
  std::set<std::string> vocabulary;
  for (const auto& f : cert.closure) {
    for (const auto& a : atoms_of(f)) vocabulary.insert(a.text());
  }
  std::vector<std::set<std::string>> valuation(cert.states.size());
  for (std::size_t t = 0; t < cert.states.size(); ++t) {
    for (std::size_t k = 0; k < cert.closure.size(); ++k) {
      if (cert.types[t][k] && cert.closure[k].is_atom()) valuation[t].insert(cert.closure[k].text());
    }
  }
  return ExplicitModel(std::move(frame), std::move(valuation), std::move(vocabulary));
}

}  // namespace devaudit
