#include "devaudit/witness.hpp"

#include <map>

#include "devaudit/error.hpp"
#include "text.hpp"

namespace devaudit {

WitnessRecord make_witness(Profile truth, Profile current, Coalition coalition, Profile deviated, Alternative x,
                           Alternative y, std::string mode) {
  const auto n = truth.size();
  if (n == 0 || current.size() != n || deviated.size() != n) {
    raise(ErrorCode::MalformedWitness, "witness profiles must have the same positive length");
  }
  if (coalition.empty()) raise(ErrorCode::MalformedWitness, "witness coalition is empty");
  if (!coalition.subset_of(Coalition::grand(static_cast<int>(n)))) {
    raise(ErrorCode::MalformedWitness, "witness coalition names an agent outside the profile");
  }
  if (!agrees_outside(current, deviated, coalition)) {
    raise(ErrorCode::MalformedWitness, "deviated report changes agents outside " + coalition.to_string());
  }
  return WitnessRecord{std::move(truth), std::move(current), coalition, std::move(deviated), x, y, std::move(mode)};
}

std::string print_witness(const WitnessRecord& w, const AlternativeSet& alts) {
  std::string out = "witness\n";
  out += "true: " + profile_text(w.truth, alts) + "\n";
  out += "current: " + profile_text(w.current, alts) + "\n";
  out += "coalition: " + w.coalition.to_string() + "\n";
  out += "deviated: " + profile_text(w.deviated, alts) + "\n";
  out += "x: " + alts.name(w.x) + "\n";
  out += "y: " + alts.name(w.y) + "\n";
  if (!w.mode.empty()) out += "mode: " + w.mode + "\n";
  return out;
}

WitnessRecord parse_witness(std::string_view input, const AlternativeSet& alts, int agents) {
  const auto lines = text::content_lines(input);
  if (lines.empty() || lines.front().content != "witness") {
    throw SyntaxError(lines.empty() ? 1 : lines.front().number, true, "expected 'witness'");
  }
  static const char* const keys[] = {"true", "current", "coalition", "deviated", "x", "y", "mode"};
  std::map<std::string, std::string_view> fields;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    bool matched = false;
    for (const char* key : keys) {
      std::string_view rest;
      if (text::take_key(lines[k].content, key, rest)) {
        if (!fields.emplace(key, rest).second) throw SyntaxError(lines[k].number, true, std::string("duplicate '") + key + "'");
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(lines[k].number, true, "unknown witness field");
  }
  for (const char* key : keys) {
    if (std::string(key) != "mode" && !fields.count(key)) {
      raise(ErrorCode::MalformedWitness, std::string("witness lacks '") + key + "'");
    }
  }
  return make_witness(parse_profile(fields["true"], alts, agents), parse_profile(fields["current"], alts, agents),
                      parse_coalition(fields["coalition"], agents), parse_profile(fields["deviated"], alts, agents),
                      alts.index_of(fields["x"]), alts.index_of(fields["y"]),
                      fields.count("mode") ? std::string(fields["mode"]) : std::string());
}

std::string witness_fields(const WitnessRecord& w, const AlternativeSet& alts) {
  return profile_text(w.truth, alts) + "\t" + profile_text(w.current, alts) + "\t" + w.coalition.to_string() + "\t" +
         profile_text(w.deviated, alts) + "\t" + alts.name(w.x) + "\t" + alts.name(w.y);
}

}  // namespace devaudit
