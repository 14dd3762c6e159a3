#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "devaudit/coalition.hpp"

namespace devaudit {

/// Alternatives are referred to by their index in an AlternativeSet.
using Alternative = int;

inline constexpr int kMaxAlternatives = 16;

/// Ordered list of alternative names (`[A-Za-z0-9]+`, distinct).
class AlternativeSet {
 public:
  AlternativeSet() = default;
  explicit AlternativeSet(std::vector<std::string> names);

  int size() const noexcept { return static_cast<int>(names_.size()); }
  const std::string& name(Alternative x) const { return names_.at(static_cast<std::size_t>(x)); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<Alternative> find(std::string_view name) const;
  /// Throws Error(UnknownAlternative).
  Alternative index_of(std::string_view name) const;

  friend bool operator==(const AlternativeSet& a, const AlternativeSet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Alternative> index_;
};

/// Strict linear order over alternatives 0..m-1, best first. Also used to
/// represent an axis, read left to right.
class LinearOrder {
 public:
  LinearOrder() = default;
  /// Throws Error(InvalidArgument) unless `ranking` is a permutation of 0..m-1.
  static LinearOrder from_ranking(const std::vector<Alternative>& ranking);
  /// Identity ranking 0 > 1 > ... > m-1.
  static LinearOrder identity(int m);

  int size() const noexcept { return static_cast<int>(ranking_.size()); }
  Alternative at(int rank) const { return ranking_.at(static_cast<std::size_t>(rank)); }
  Alternative top() const { return ranking_.front(); }
  int position(Alternative x) const { return position_.at(static_cast<std::size_t>(x)); }
  bool prefers(Alternative x, Alternative y) const { return position(x) < position(y); }
  const std::vector<std::uint8_t>& ranking() const noexcept { return ranking_; }

  /// "b > a > c".
  std::string text(const AlternativeSet& alts) const;
  /// "a < b < c" for axes.
  std::string axis_text(const AlternativeSet& alts) const;

  friend bool operator==(const LinearOrder& a, const LinearOrder& b) { return a.ranking_ == b.ranking_; }
  friend std::strong_ordering operator<=>(const LinearOrder& a, const LinearOrder& b) {
    return a.ranking_ <=> b.ranking_;
  }

 private:
  std::vector<std::uint8_t> ranking_;
  std::vector<std::uint8_t> position_;
};

/// One order per agent; agent i is at index i-1.
using Profile = std::vector<LinearOrder>;

/// Parses "b > a > c". Every alternative must occur exactly once.
LinearOrder parse_order(std::string_view text, const AlternativeSet& alts);
/// Parses "a < b < c" into an axis (left end first).
LinearOrder parse_axis(std::string_view text, const AlternativeSet& alts);
/// Parses "b > a > c; a > b > c; ..." with exactly `agents` orders.
Profile parse_profile(std::string_view text, const AlternativeSet& alts, int agents);
std::string profile_text(const Profile& profile, const AlternativeSet& alts);

/// Agents whose orders differ between the two profiles.
Coalition changed_agents(const Profile& p, const Profile& q);
/// Q agrees with P outside C.
bool agrees_outside(const Profile& p, const Profile& q, Coalition c);
/// Copy of `p` with agent's order replaced.
Profile with_order(Profile p, int agent, const LinearOrder& order);

/// All m! orders in lexicographic order of their rankings.
std::vector<LinearOrder> all_orders(int m);

/// Endpoint-deletion decoding: bit k (k = 1..m-1, bit 1 most significant
/// in `index`) removes the left endpoint of the remaining axis segment as
/// the next-worst alternative when 0, the right endpoint when 1; the last
/// survivor is the peak.
LinearOrder single_peaked_from_bits(const LinearOrder& axis, std::uint64_t index);

/// The 2^(m-1) single-peaked orders for `axis`, indexed by bit string.
std::vector<LinearOrder> generate_single_peaked(const LinearOrder& axis);

/// Literal definition: preference strictly decreases moving away from the
/// peak along the axis on both sides.
bool is_single_peaked(const LinearOrder& order, const LinearOrder& axis);

}  // namespace devaudit
