#include "devaudit/rule.hpp"

#include <algorithm>

#include "devaudit/error.hpp"
#include "text.hpp"

namespace devaudit {

Rule::Rule(Kind kind, int agents, AlternativeSet alts) : kind_(kind), agents_(agents), alts_(std::move(alts)) {
  check_agent_count(agents_);
  if (alts_.size() == 0) raise(ErrorCode::InvalidArgument, "rule without alternatives");
}

Rule Rule::plurality(int agents, AlternativeSet alts, LinearOrder tiebreak) {
  Rule r(Kind::Plurality, agents, std::move(alts));
  if (tiebreak.size() != r.alts_.size()) raise(ErrorCode::InvalidArgument, "tie-break order does not cover the alternatives");
  r.order_ = std::move(tiebreak);
  return r;
}

Rule Rule::median(int agents, AlternativeSet alts, LinearOrder axis) {
  if (agents % 2 == 0) raise(ErrorCode::InvalidArgument, "median rule needs an odd number of agents");
  Rule r(Kind::Median, agents, std::move(alts));
  if (axis.size() != r.alts_.size()) raise(ErrorCode::InvalidArgument, "axis does not cover the alternatives");
  r.order_ = std::move(axis);
  return r;
}

Rule Rule::dictatorship(int agents, AlternativeSet alts, int dictator) {
  Rule r(Kind::Dictatorship, agents, std::move(alts));
  if (dictator < 1 || dictator > agents) raise(ErrorCode::OutOfRangeAgent, "dictator outside the agent set");
  r.agent_ = dictator;
  return r;
}

Rule Rule::constant(int agents, AlternativeSet alts, Alternative value) {
  Rule r(Kind::Constant, agents, std::move(alts));
  if (value < 0 || value >= r.alts_.size()) raise(ErrorCode::UnknownAlternative, "constant value out of range");
  r.value_ = value;
  return r;
}

Rule Rule::table(int agents, AlternativeSet alts, std::map<Profile, Alternative> rows) {
  Rule r(Kind::Table, agents, std::move(alts));
  for (const auto& [p, x] : rows) {
    if (static_cast<int>(p.size()) != agents) raise(ErrorCode::InvalidArgument, "table row has wrong length");
    if (x < 0 || x >= r.alts_.size()) raise(ErrorCode::UnknownAlternative, "table value out of range");
  }
  r.table_ = std::move(rows);
  return r;
}

Rule Rule::with_overlay(std::map<Profile, Alternative> rows) const {
  Rule r = *this;
  for (auto& [p, x] : rows) {
    if (static_cast<int>(p.size()) != agents_) raise(ErrorCode::InvalidArgument, "overlay row has wrong length");
    if (x < 0 || x >= alts_.size()) raise(ErrorCode::UnknownAlternative, "overlay value out of range");
    if (kind_ == Kind::Table && table_.count(p)) {
      raise(ErrorCode::NotAnExtension, "overlay row " + profile_text(p, alts_) + " is already a table row");
    }
    r.overlay_[p] = x;
  }
  return r;
}

Rule Rule::base_only() const {
  Rule r = *this;
  r.overlay_.clear();
  return r;
}

std::optional<Alternative> Rule::apply_base(const Profile& report) const {
  if (static_cast<int>(report.size()) != agents_) return std::nullopt;
  for (const auto& o : report) {
    if (o.size() != alts_.size()) return std::nullopt;
  }
  switch (kind_) {
    case Kind::Plurality: {
      std::vector<int> votes(static_cast<std::size_t>(alts_.size()), 0);
      for (const auto& o : report) ++votes[static_cast<std::size_t>(o.top())];
      Alternative best = order_.at(0);
      for (int r = 1; r < order_.size(); ++r) {
        const Alternative x = order_.at(r);
        if (votes[static_cast<std::size_t>(x)] > votes[static_cast<std::size_t>(best)]) best = x;
      }
      return best;
    }
    case Kind::Median: {
      std::vector<int> peaks;
      peaks.reserve(report.size());
      for (const auto& o : report) peaks.push_back(order_.position(o.top()));
      const auto mid = peaks.begin() + static_cast<std::ptrdiff_t>(peaks.size() / 2);
      std::nth_element(peaks.begin(), mid, peaks.end());
      return order_.at(*mid);
    }
    case Kind::Dictatorship: return report[static_cast<std::size_t>(agent_ - 1)].top();
    case Kind::Constant: return value_;
    case Kind::Table: {
      auto it = table_.find(report);
      if (it == table_.end()) return std::nullopt;
      return it->second;
    }
  }
  return std::nullopt;
}

std::optional<Alternative> Rule::try_apply(const Profile& report) const {
  if (!overlay_.empty()) {
    if (auto it = overlay_.find(report); it != overlay_.end()) return it->second;
  }
  return apply_base(report);
}

Alternative Rule::apply(const Profile& report) const {
  if (auto x = try_apply(report)) return *x;
  raise(ErrorCode::OffDomainReport, "rule undefined at report " +
                                        (static_cast<int>(report.size()) == agents_ ? profile_text(report, alts_)
                                                                                     : std::string("<malformed>")));
}

std::string Rule::describe() const {
  switch (kind_) {
    case Kind::Plurality: return "plurality tiebreak " + order_.text(alts_);
    case Kind::Median: return "median axis " + order_.axis_text(alts_);
    case Kind::Dictatorship: return "dictator " + std::to_string(agent_);
    case Kind::Constant: return "constant " + alts_.name(value_);
    case Kind::Table: return "table";
  }
  return "?";
}

// ------------------------------------------------------------------ parsing

namespace {

struct RowLine {
  std::size_t number;
  std::string_view profile;
  std::string_view value;
};

RowLine split_row(const text::Line& line) {
  auto body = line.content;
  if (!text::starts_with(body, "row ")) throw SyntaxError(line.number, true, "expected 'row <profile> -> <alt>'");
  body = body.substr(4);
  const auto arrow = body.rfind("->");
  if (arrow == std::string_view::npos) throw SyntaxError(line.number, true, "row without '->'");
  return {line.number, text::trim(body.substr(0, arrow)), text::trim(body.substr(arrow + 2))};
}

// Alternatives mentioned by an order or axis line, in written order.
std::vector<std::string> names_in_chain(std::string_view chain, char sep) {
  std::vector<std::string> out;
  for (auto part : text::split(chain, sep)) out.emplace_back(part);
  return out;
}

}  // namespace

Rule parse_rule(std::string_view input) {
  const auto lines = text::content_lines(input);
  std::optional<int> agents;
  std::optional<std::vector<std::string>> alt_names;
  std::optional<text::Line> rule_line;
  std::vector<RowLine> table_rows;
  std::vector<RowLine> overlay_rows;
  enum class Section { Header, Table, Extend } section = Section::Header;

  for (const auto& line : lines) {
    std::string_view rest;
    if (section == Section::Header && text::take_key(line.content, "agents", rest)) {
      if (agents) throw SyntaxError(line.number, true, "duplicate 'agents:'");
      try {
        std::size_t used = 0;
        agents = std::stoi(std::string(rest), &used);
        if (used != rest.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw SyntaxError(line.number, true, "bad agent count");
      }
      check_agent_count(*agents);
    } else if (section == Section::Header && text::take_key(line.content, "alternatives", rest)) {
      if (alt_names) throw SyntaxError(line.number, true, "duplicate 'alternatives:'");
      alt_names.emplace();
      for (auto w : text::split_ws(rest)) alt_names->emplace_back(w);
    } else if (text::starts_with(line.content, "rule ") || line.content == "rule") {
      if (rule_line) throw SyntaxError(line.number, true, "duplicate rule line");
      if (section == Section::Extend) throw SyntaxError(line.number, true, "rule line after 'extend'");
      rule_line = line;
      if (text::trim(line.content.substr(4)) == "table") section = Section::Table;
    } else if (line.content == "extend") {
      if (section == Section::Extend) throw SyntaxError(line.number, true, "duplicate 'extend'");
      section = Section::Extend;
    } else if (text::starts_with(line.content, "row ")) {
      if (section == Section::Table) {
        table_rows.push_back(split_row(line));
      } else if (section == Section::Extend) {
        overlay_rows.push_back(split_row(line));
      } else {
        throw SyntaxError(line.number, true, "row outside 'rule table' or 'extend'");
      }
    } else {
      throw SyntaxError(line.number, true, "unrecognised line '" + std::string(line.content) + "'");
    }
  }
  if (!agents) raise(ErrorCode::InvalidArgument, "rule file lacks 'agents:'");
  if (!rule_line) raise(ErrorCode::InvalidArgument, "rule file lacks a rule line");

  const auto words = text::split_ws(rule_line->content);
  // Text following the k-th word of the rule line.
  const auto after = [&](std::size_t k) {
    const auto line = rule_line->content;
    const auto end = static_cast<std::size_t>(words[k - 1].data() + words[k - 1].size() - line.data());
    return text::trim(line.substr(end));
  };
  if (words.size() < 2) throw SyntaxError(rule_line->number, true, "incomplete rule line");
  const auto kind = words[1];

  auto alternatives_from = [&](std::string_view chain, char sep) {
    if (alt_names) return AlternativeSet(*alt_names);
    return AlternativeSet(names_in_chain(chain, sep));
  };
  auto need_alternatives = [&]() {
    if (!alt_names) throw SyntaxError(rule_line->number, true, "this rule needs an 'alternatives:' line");
    return AlternativeSet(*alt_names);
  };

  std::optional<Rule> rule;
  if (kind == "plurality") {
    if (words.size() < 3 || words[2] != "tiebreak") throw SyntaxError(rule_line->number, true, "expected 'rule plurality tiebreak <order>'");
    const auto chain = after(3);
    auto alts = alternatives_from(chain, '>');
    auto order = parse_order(chain, alts);
    rule = Rule::plurality(*agents, std::move(alts), std::move(order));
  } else if (kind == "median") {
    if (words.size() < 3 || words[2] != "axis") throw SyntaxError(rule_line->number, true, "expected 'rule median axis <axis>'");
    const auto chain = after(3);
    auto alts = alternatives_from(chain, '<');
    auto axis = parse_axis(chain, alts);
    rule = Rule::median(*agents, std::move(alts), std::move(axis));
  } else if (kind == "dictator") {
    if (words.size() != 3) throw SyntaxError(rule_line->number, true, "expected 'rule dictator <i>'");
    int i = 0;
    try {
      i = std::stoi(std::string(words[2]));
    } catch (const std::exception&) {
      throw SyntaxError(rule_line->number, true, "bad dictator index");
    }
    rule = Rule::dictatorship(*agents, need_alternatives(), i);
  } else if (kind == "constant") {
    if (words.size() != 3) throw SyntaxError(rule_line->number, true, "expected 'rule constant <alt>'");
    auto alts = need_alternatives();
    const auto x = alts.index_of(words[2]);
    rule = Rule::constant(*agents, std::move(alts), x);
  } else if (kind == "table") {
    if (words.size() != 2) throw SyntaxError(rule_line->number, true, "expected 'rule table'");
    auto alts = need_alternatives();
    std::map<Profile, Alternative> rows;
    for (const auto& row : table_rows) {
      auto p = parse_profile(row.profile, alts, *agents);
      if (!rows.emplace(std::move(p), alts.index_of(row.value)).second) {
        throw SyntaxError(row.number, true, "duplicate table row");
      }
    }
    rule = Rule::table(*agents, std::move(alts), std::move(rows));
  } else {
    throw SyntaxError(rule_line->number, true, "unknown rule kind '" + std::string(kind) + "'");
  }

  if (!overlay_rows.empty()) {
    std::map<Profile, Alternative> rows;
    for (const auto& row : overlay_rows) {
      auto p = parse_profile(row.profile, rule->alternatives(), *agents);
      if (!rows.emplace(std::move(p), rule->alternatives().index_of(row.value)).second) {
        throw SyntaxError(row.number, true, "duplicate overlay row");
      }
    }
    rule = rule->with_overlay(std::move(rows));
  }
  return *rule;
}

std::string print_rule(const Rule& rule) {
  const auto& alts = rule.alternatives();
  std::string out = "agents: " + std::to_string(rule.agents()) + "\nalternatives:";
  for (const auto& n : alts.names()) out += " " + n;
  out += "\nrule " + rule.describe() + "\n";
  for (const auto& [p, x] : rule.table_rows()) out += "row " + profile_text(p, alts) + " -> " + alts.name(x) + "\n";
  if (!rule.overlay().empty()) {
    out += "extend\n";
    for (const auto& [p, x] : rule.overlay()) out += "row " + profile_text(p, alts) + " -> " + alts.name(x) + "\n";
  }
  return out;
}

}  // namespace devaudit
