#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace devaudit {

/// Agents are numbered 1..n with n at most this bound, so every coalition
/// label over N fits a 16-bit mask.
inline constexpr int kMaxAgents = 16;

/// A subset of the agent set {1..n}, stored as a bitmask (bit i-1 = agent i).
class Coalition {
 public:
  constexpr Coalition() = default;

  static Coalition from_mask(std::uint32_t mask);
  static Coalition of(std::initializer_list<int> agents);
  static Coalition of(const std::vector<int>& agents);
  static Coalition singleton(int agent);
  /// The grand coalition N = {1..n}.
  static Coalition grand(int agents);

  constexpr std::uint32_t mask() const noexcept { return mask_; }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  int size() const noexcept;
  bool contains(int agent) const noexcept;
  /// Largest member, 0 for the empty coalition.
  int max_agent() const noexcept;
  std::vector<int> members() const;

  constexpr bool subset_of(Coalition other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr Coalition operator|(Coalition other) const noexcept {
    return Coalition(mask_ | other.mask_);
  }
  constexpr Coalition operator&(Coalition other) const noexcept {
    return Coalition(mask_ & other.mask_);
  }
  constexpr Coalition minus(Coalition other) const noexcept {
    return Coalition(mask_ & ~other.mask_);
  }
  /// N \ C for the ambient agent count.
  Coalition complement(int agents) const noexcept;

  /// Canonical text, e.g. "{}" or "{1,3}".
  std::string to_string() const;

  friend constexpr bool operator==(Coalition a, Coalition b) noexcept { return a.mask_ == b.mask_; }

 private:
  constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

/// Label order used for every deterministic report: by size, then
/// lexicographically on the sorted member list.
bool label_less(Coalition a, Coalition b);

/// All 2^n labels over {1..n} in label order.
std::vector<Coalition> all_labels(int agents);

/// Parses "{}", "{1}", "{1, 3}". Members must lie in 1..agents.
/// Throws SyntaxError (offset-based) or Error(OutOfRangeAgent).
Coalition parse_coalition(std::string_view text, int agents);

/// Validates an agent count against kMaxAgents.
void check_agent_count(int agents);

}  // namespace devaudit
