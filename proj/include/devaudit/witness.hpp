#pragma once

#include <string>
#include <string_view>

#include "devaudit/preference.hpp"

namespace devaudit {

/// W = (R, P, C, Q, x, y, mode): true profile, current report, deviating
/// coalition, deviated report, current outcome, deviated outcome, and
/// free-form input-mode metadata.
struct WitnessRecord {
  Profile truth;
  Profile current;
  Coalition coalition;
  Profile deviated;
  Alternative x = 0;
  Alternative y = 0;
  std::string mode;

  friend bool operator==(const WitnessRecord&, const WitnessRecord&) = default;
};

/// Validated construction: equal profile lengths, non-empty coalition
/// inside the agent set, Q agreeing with P outside C. Throws
/// Error(MalformedWitness).
WitnessRecord make_witness(Profile truth, Profile current, Coalition coalition, Profile deviated, Alternative x,
                           Alternative y, std::string mode = "");

/// Block format:
///   witness
///   true: <profile>
///   current: <profile>
///   coalition: {5}
///   deviated: <profile>
///   x: b
///   y: c
///   mode: <text>
std::string print_witness(const WitnessRecord& w, const AlternativeSet& alts);
WitnessRecord parse_witness(std::string_view text, const AlternativeSet& alts, int agents);

/// Tab-separated single line: R, P, C, Q, x, y.
std::string witness_fields(const WitnessRecord& w, const AlternativeSet& alts);

}  // namespace devaudit
