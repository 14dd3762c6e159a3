#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "devaudit/preference.hpp"

namespace devaudit {

/// Description of a set of profiles: the true domain 𝓓 or a report domain 𝓜.
struct DomainSpec {
  enum class Kind { Universal, SinglePeaked, Product, List };

  Kind kind = Kind::Universal;
  LinearOrder axis;                               // SinglePeaked
  std::vector<std::vector<LinearOrder>> options;  // Product, per agent
  std::vector<Profile> profiles;                  // List

  static DomainSpec universal();
  static DomainSpec single_peaked(LinearOrder axis);
  static DomainSpec product(std::vector<std::vector<LinearOrder>> per_agent);
  static DomainSpec list(std::vector<Profile> profiles);

  std::string describe(const AlternativeSet& alts) const;
};

/// Parses a domain description. Accepted forms:
///   `universal`
///   `singlepeaked a < b < c < d`
///   a multi-line document starting with `domain list` (then `profile:` lines)
///   or `domain product` (then `agent <i>: <order> ; <order> ...` lines).
/// A first line of the form `domain universal` / `domain singlepeaked ...` is
/// also accepted.
DomainSpec parse_domain(std::string_view text, const AlternativeSet& alts, int agents);

/// Indexed enumeration of a domain, optionally extended by extra listed
/// rows not in the base (the rows 𝓜′ ∖ 𝓜 of an extension).
///
/// Product-shaped domains (universal, single-peaked, per-agent product)
/// index profiles in mixed radix, agent 1 most significant; per-agent
/// options are in generator order (lexicographic permutations for the
/// universal domain, bit-string order for single-peaked). Listed domains use
/// list order. Extra rows follow the base.
class ProfileSpace {
 public:
  ProfileSpace(DomainSpec spec, int agents, AlternativeSet alts, std::vector<Profile> extra = {});

  int agents() const noexcept { return agents_; }
  const AlternativeSet& alternatives() const noexcept { return alts_; }
  const DomainSpec& spec() const noexcept { return spec_; }
  bool is_product() const noexcept { return product_; }
  bool has_extra() const noexcept { return !extra_.empty(); }
  const std::vector<Profile>& extra() const noexcept { return extra_; }

  /// Number of base rows; saturates at UINT64_MAX.
  std::uint64_t base_size() const noexcept { return base_size_; }
  std::uint64_t size() const noexcept;

  /// Per-agent report options of a product-shaped base.
  const std::vector<LinearOrder>& options(int agent) const;

  Profile profile(std::uint64_t index) const;
  std::optional<std::uint64_t> index_of(const Profile& p) const;
  bool in_base(const Profile& p) const;
  bool contains(const Profile& p) const { return index_of(p).has_value(); }

  /// Visits every Q in the space with Q ≡_{-C} P, in index order for
  /// product bases (then extras in list order). P itself is included when
  /// it lies in the space. The visitor returns false to stop.
  void for_each_deviation(const Profile& p, Coalition c,
                          const std::function<bool(const Profile&, std::uint64_t)>& visit) const;

  /// Visits every profile in index order.
  void for_each(const std::function<bool(const Profile&, std::uint64_t)>& visit) const;

 private:
  std::optional<int> option_index(int agent, const LinearOrder& o) const;

  DomainSpec spec_;
  int agents_;
  AlternativeSet alts_;
  bool product_ = false;
  std::vector<std::vector<LinearOrder>> options_;
  std::vector<std::map<LinearOrder, int>> option_lookup_;
  std::map<Profile, std::uint64_t> list_lookup_;
  std::vector<Profile> extra_;
  std::map<Profile, std::uint64_t> extra_lookup_;
  std::uint64_t base_size_ = 0;
};

/// Whether every profile of `inner` lies in `outer`.
bool space_subset(const ProfileSpace& inner, const ProfileSpace& outer);

}  // namespace devaudit
