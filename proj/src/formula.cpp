#include "devaudit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "devaudit/error.hpp"

namespace devaudit {

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  std::string second;
  int agent = 0;
  Coalition coalition;
  Formula lhs;
  Formula rhs;
  std::string text;
  std::size_t count = 1;
};

namespace {

std::shared_ptr<Formula::Node> make_node(FormulaKind kind) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = kind;
  return n;
}

}  // namespace

const Formula::Node& Formula::node() const {
  if (!node_) throw std::logic_error("use of an empty Formula");
  return *node_;
}

Formula Formula::outcome(std::string alternative) {
  auto n = make_node(FormulaKind::Outcome);
  n->text = "o_" + alternative;
  n->name = std::move(alternative);
  return Formula(std::move(n));
}

Formula Formula::preference(int agent, std::string better, std::string worse) {
  auto n = make_node(FormulaKind::Preference);
  n->agent = agent;
  n->text = "p_" + std::to_string(agent) + "_" + better + "_" + worse;
  n->name = std::move(better);
  n->second = std::move(worse);
  return Formula(std::move(n));
}

Formula Formula::top(int agent, std::string alternative) {
  auto n = make_node(FormulaKind::Top);
  n->agent = agent;
  n->text = "t_" + std::to_string(agent) + "_" + alternative;
  n->name = std::move(alternative);
  return Formula(std::move(n));
}

Formula Formula::letter(std::string name) {
  auto n = make_node(FormulaKind::Letter);
  n->text = name;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula operand) {
  auto n = make_node(FormulaKind::Not);
  n->text = "~" + operand.text();
  n->count = operand.node_count() + 1;
  n->lhs = std::move(operand);
  return Formula(std::move(n));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto n = make_node(FormulaKind::And);
  n->text = "(" + lhs.text() + " & " + rhs.text() + ")";
  n->count = lhs.node_count() + rhs.node_count() + 1;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  auto n = make_node(FormulaKind::Or);
  n->text = "(" + lhs.text() + " | " + rhs.text() + ")";
  n->count = lhs.node_count() + rhs.node_count() + 1;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  auto n = make_node(FormulaKind::Implies);
  n->text = "(" + lhs.text() + " -> " + rhs.text() + ")";
  n->count = lhs.node_count() + rhs.node_count() + 1;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::biconditional(const Formula& lhs, const Formula& rhs) {
  return conjunction(implication(lhs, rhs), implication(rhs, lhs));
}

Formula Formula::diamond(Coalition coalition, Formula operand) {
  auto n = make_node(FormulaKind::Diamond);
  n->coalition = coalition;
  n->text = "<" + coalition.to_string() + ">" + operand.text();
  n->count = operand.node_count() + 1;
  n->lhs = std::move(operand);
  return Formula(std::move(n));
}

Formula Formula::box(Coalition coalition, Formula operand) {
  auto n = make_node(FormulaKind::Box);
  n->coalition = coalition;
  n->text = "[" + coalition.to_string() + "]" + operand.text();
  n->count = operand.node_count() + 1;
  n->lhs = std::move(operand);
  return Formula(std::move(n));
}

Formula Formula::conjunction_of(const std::vector<Formula>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty conjunction");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conjunction(acc, parts[i]);
  return acc;
}

Formula Formula::disjunction_of(const std::vector<Formula>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty disjunction");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disjunction(acc, parts[i]);
  return acc;
}

FormulaKind Formula::kind() const { return node().kind; }

bool Formula::is_atom() const {
  const auto k = kind();
  return k == FormulaKind::Outcome || k == FormulaKind::Preference || k == FormulaKind::Top ||
         k == FormulaKind::Letter;
}

bool Formula::is_modal() const {
  return kind() == FormulaKind::Diamond || kind() == FormulaKind::Box;
}

bool Formula::is_binary() const {
  const auto k = kind();
  return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Implies;
}

const std::string& Formula::name() const { return node().name; }
const std::string& Formula::second_name() const { return node().second; }
int Formula::agent() const { return node().agent; }
Coalition Formula::coalition() const { return node().coalition; }

const Formula& Formula::operand() const {
  if (is_atom() || is_binary()) throw std::logic_error("formula has no single operand");
  return node().lhs;
}

const Formula& Formula::lhs() const {
  if (!is_binary()) throw std::logic_error("formula is not binary");
  return node().lhs;
}

const Formula& Formula::rhs() const {
  if (!is_binary()) throw std::logic_error("formula is not binary");
  return node().rhs;
}

const std::string& Formula::text() const { return node().text; }
std::size_t Formula::node_count() const { return node().count; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->text == b.node_->text;
}

bool operator<(const Formula& a, const Formula& b) {
  if (!a.node_ || !b.node_) return !a.node_ && b.node_;
  return a.node_->text < b.node_->text;
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t pos, const FormulaContext& ctx)
      : text_(text), pos_(pos), ctx_(ctx) {}

  Formula formula() {
    skip();
    if (at_end()) fail_eof("expected formula");
    const char ch = text_[pos_];
    if (ch == '~') {
      ++pos_;
      return Formula::negation(formula());
    }
    if (ch == '(') {
      ++pos_;
      Formula lhs = formula();
      skip();
      const FormulaKind op = binary_op();
      Formula rhs = formula();
      skip();
      expect(')');
      switch (op) {
        case FormulaKind::And: return Formula::conjunction(std::move(lhs), std::move(rhs));
        case FormulaKind::Or: return Formula::disjunction(std::move(lhs), std::move(rhs));
        case FormulaKind::Implies: return Formula::implication(std::move(lhs), std::move(rhs));
        default: return Formula::biconditional(lhs, rhs);
      }
    }
    if (ch == '<') {
      ++pos_;
      const Coalition c = coalition();
      skip();
      expect('>');
      return Formula::diamond(c, formula());
    }
    if (ch == '[') {
      ++pos_;
      const Coalition c = coalition();
      skip();
      expect(']');
      return Formula::box(c, formula());
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) return atom();
    fail(pos_, std::string("unexpected character '") + ch + "'");
  }

  std::size_t position() const { return pos_; }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(std::size_t at, const std::string& message) const {
    throw SyntaxError(at, false, message);
  }

  [[noreturn]] void fail_eof(const std::string& message) const {
    fail(text_.empty() ? 0 : text_.size() - 1, "unexpected end of input: " + message);
  }

  void expect(char ch) {
    if (at_end()) fail_eof(std::string("expected '") + ch + "'");
    if (text_[pos_] != ch) fail(pos_, std::string("expected '") + ch + "'");
    ++pos_;
  }

  FormulaKind binary_op() {
    if (at_end()) fail_eof("expected binary operator");
    const std::string_view rest = text_.substr(pos_);
    if (rest.substr(0, 3) == "<->") {
      pos_ += 3;
      return FormulaKind::Not;  // marker for the biconditional
    }
    if (rest.substr(0, 2) == "->") {
      pos_ += 2;
      return FormulaKind::Implies;
    }
    if (rest.front() == '&') {
      ++pos_;
      return FormulaKind::And;
    }
    if (rest.front() == '|') {
      ++pos_;
      return FormulaKind::Or;
    }
    fail(pos_, "expected one of '&', '|', '->', '<->'");
  }

  Coalition coalition() {
    skip();
    expect('{');
    std::uint32_t mask = 0;
    skip();
    if (!at_end() && text_[pos_] == '}') {
      ++pos_;
      return Coalition::from_mask(mask);
    }
    while (true) {
      skip();
      const std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) {
        if (at_end()) fail_eof("expected agent number");
        fail(pos_, "expected agent number");
      }
      const std::string digits(text_.substr(start, pos_ - start));
      const long agent = digits.size() > 6 ? 1000000 : std::stol(digits);
      check_agent(agent, start);
      mask |= 1u << (agent - 1);
      skip();
      if (at_end()) fail_eof("expected ',' or '}'");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return Coalition::from_mask(mask);
    }
  }

  void check_agent(long agent, std::size_t at) const {
    if (agent < 1 || agent > ctx_.agents) {
      raise(ErrorCode::OutOfRangeAgent, "offset " + std::to_string(at) + ": agent " +
                                            std::to_string(agent) + " outside 1.." +
                                            std::to_string(ctx_.agents));
    }
  }

  void check_alternative(const std::string& alt, std::size_t at) const {
    if (std::find(ctx_.alternatives.begin(), ctx_.alternatives.end(), alt) == ctx_.alternatives.end()) {
      raise(ErrorCode::UnknownAlternative,
            "offset " + std::to_string(at) + ": unknown alternative '" + alt + "'");
    }
  }

  int agent_field(const std::string& field, std::size_t at) const {
    if (field.empty() || !std::all_of(field.begin(), field.end(),
                                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      fail(at, "malformed agent index in atom");
    }
    const long agent = field.size() > 6 ? 1000000 : std::stol(field);
    check_agent(agent, at);
    return static_cast<int>(agent);
  }

  Formula atom() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string ident(text_.substr(start, pos_ - start));
    if (ctx_.alternatives.empty()) return Formula::letter(ident);

    std::vector<std::string> parts;
    std::size_t from = 0;
    while (true) {
      const auto us = ident.find('_', from);
      parts.push_back(ident.substr(from, us - from));
      if (us == std::string::npos) break;
      from = us + 1;
    }
    if (parts.size() < 2 || (parts[0] != "o" && parts[0] != "p" && parts[0] != "t")) {
      return Formula::letter(ident);
    }
    if (parts[0] == "o" && parts.size() == 2) {
      check_alternative(parts[1], start);
      return Formula::outcome(parts[1]);
    }
    if (parts[0] == "p" && parts.size() == 4) {
      const int i = agent_field(parts[1], start);
      check_alternative(parts[2], start);
      check_alternative(parts[3], start);
      return Formula::preference(i, parts[2], parts[3]);
    }
    if (parts[0] == "t" && parts.size() == 3) {
      const int i = agent_field(parts[1], start);
      check_alternative(parts[2], start);
      return Formula::top(i, parts[2]);
    }
    fail(start, "malformed atom '" + ident + "'");
  }

  std::string_view text_;
  std::size_t pos_;
  const FormulaContext& ctx_;
};

}  // namespace

std::pair<Formula, std::size_t> parse_formula_prefix(std::string_view text, std::size_t start,
                                                     const FormulaContext& context) {
  Parser parser(text, start, context);
  Formula f = parser.formula();
  return {std::move(f), parser.position()};
}

Formula parse_formula(std::string_view text, const FormulaContext& context) {
  auto [formula, end] = parse_formula_prefix(text, 0, context);
  while (end < text.size() && std::isspace(static_cast<unsigned char>(text[end]))) ++end;
  if (end != text.size()) throw SyntaxError(end, false, "trailing input after formula");
  return formula;
}

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& seen, std::vector<Formula>& out) {
  if (f.is_atom()) {
    if (seen.insert(f.text()).second) out.push_back(f);
    return;
  }
  if (f.is_binary()) {
    collect_atoms(f.lhs(), seen, out);
    collect_atoms(f.rhs(), seen, out);
  } else {
    collect_atoms(f.operand(), seen, out);
  }
}

void collect_coalitions(const Formula& f, std::vector<Coalition>& out) {
  if (f.is_atom()) return;
  if (f.is_binary()) {
    collect_coalitions(f.lhs(), out);
    collect_coalitions(f.rhs(), out);
    return;
  }
  if (f.is_modal() && std::find(out.begin(), out.end(), f.coalition()) == out.end()) {
    out.push_back(f.coalition());
  }
  collect_coalitions(f.operand(), out);
}

}  // namespace

std::vector<Formula> atoms_of(const Formula& formula) {
  std::set<std::string> seen;
  std::vector<Formula> out;
  collect_atoms(formula, seen, out);
  return out;
}

std::vector<Coalition> coalitions_of(const Formula& formula) {
  std::vector<Coalition> out;
  collect_coalitions(formula, out);
  return out;
}

}  // namespace devaudit
