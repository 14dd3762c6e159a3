#include "devaudit/preference.hpp"

#include <algorithm>
#include <numeric>

#include "devaudit/error.hpp"
#include "text.hpp"

namespace devaudit {

namespace {

bool valid_alternative_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  });
}

LinearOrder parse_chain(std::string_view input, const AlternativeSet& alts, char sep) {
  const auto parts = text::split(input, sep);
  std::vector<Alternative> ranking;
  for (auto part : parts) {
    if (part.empty()) raise(ErrorCode::InvalidArgument, "empty entry in order '" + std::string(input) + "'");
    ranking.push_back(alts.index_of(part));
  }
  if (static_cast<int>(ranking.size()) != alts.size()) {
    raise(ErrorCode::InvalidArgument, "order '" + std::string(input) + "' does not rank every alternative exactly once");
  }
  return LinearOrder::from_ranking(ranking);
}

}  // namespace

AlternativeSet::AlternativeSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) raise(ErrorCode::InvalidArgument, "no alternatives");
  if (names_.size() > static_cast<std::size_t>(kMaxAlternatives)) {
    raise(ErrorCode::InvalidArgument, "at most " + std::to_string(kMaxAlternatives) + " alternatives are supported");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_alternative_name(names_[i])) raise(ErrorCode::InvalidArgument, "bad alternative name '" + names_[i] + "'");
    if (!index_.emplace(names_[i], static_cast<Alternative>(i)).second) {
      raise(ErrorCode::InvalidArgument, "duplicate alternative '" + names_[i] + "'");
    }
  }
}

std::optional<Alternative> AlternativeSet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Alternative AlternativeSet::index_of(std::string_view name) const {
  if (auto x = find(name)) return *x;
  raise(ErrorCode::UnknownAlternative, "unknown alternative '" + std::string(name) + "'");
}

LinearOrder LinearOrder::from_ranking(const std::vector<Alternative>& ranking) {
  const auto m = ranking.size();
  if (m == 0 || m > static_cast<std::size_t>(kMaxAlternatives)) raise(ErrorCode::InvalidArgument, "bad order length");
  LinearOrder out;
  out.ranking_.resize(m);
  out.position_.assign(m, 0xff);
  for (std::size_t r = 0; r < m; ++r) {
    const auto x = ranking[r];
    if (x < 0 || static_cast<std::size_t>(x) >= m || out.position_[static_cast<std::size_t>(x)] != 0xff) {
      raise(ErrorCode::InvalidArgument, "ranking is not a permutation");
    }
    out.ranking_[r] = static_cast<std::uint8_t>(x);
    out.position_[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(r);
  }
  return out;
}

LinearOrder LinearOrder::identity(int m) {
  std::vector<Alternative> r(static_cast<std::size_t>(m));
  std::iota(r.begin(), r.end(), 0);
  return from_ranking(r);
}

std::string LinearOrder::text(const AlternativeSet& alts) const {
  std::string out;
  for (std::size_t r = 0; r < ranking_.size(); ++r) {
    if (r) out += " > ";
    out += alts.name(ranking_[r]);
  }
  return out;
}

std::string LinearOrder::axis_text(const AlternativeSet& alts) const {
  std::string out;
  for (std::size_t r = 0; r < ranking_.size(); ++r) {
    if (r) out += " < ";
    out += alts.name(ranking_[r]);
  }
  return out;
}

LinearOrder parse_order(std::string_view input, const AlternativeSet& alts) {
  return parse_chain(input, alts, '>');
}

LinearOrder parse_axis(std::string_view input, const AlternativeSet& alts) {
  return parse_chain(input, alts, '<');
}

Profile parse_profile(std::string_view input, const AlternativeSet& alts, int agents) {
  Profile out;
  for (auto part : text::split(input, ';')) out.push_back(parse_order(part, alts));
  if (static_cast<int>(out.size()) != agents) {
    raise(ErrorCode::InvalidArgument, "profile '" + std::string(input) + "' has " + std::to_string(out.size()) +
                                          " orders, expected " + std::to_string(agents));
  }
  return out;
}

std::string profile_text(const Profile& profile, const AlternativeSet& alts) {
  std::string out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out += "; ";
    out += profile[i].text(alts);
  }
  return out;
}

Coalition changed_agents(const Profile& p, const Profile& q) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < p.size() && i < q.size(); ++i) {
    if (!(p[i] == q[i])) mask |= 1u << i;
  }
  return Coalition::from_mask(mask);
}

bool agrees_outside(const Profile& p, const Profile& q, Coalition c) {
  return p.size() == q.size() && changed_agents(p, q).subset_of(c);
}

Profile with_order(Profile p, int agent, const LinearOrder& order) {
  p.at(static_cast<std::size_t>(agent - 1)) = order;
  return p;
}

std::vector<LinearOrder> all_orders(int m) {
  std::vector<Alternative> r(static_cast<std::size_t>(m));
  std::iota(r.begin(), r.end(), 0);
  std::vector<LinearOrder> out;
  do {
    out.push_back(LinearOrder::from_ranking(r));
  } while (std::next_permutation(r.begin(), r.end()));
  return out;
}

LinearOrder single_peaked_from_bits(const LinearOrder& axis, std::uint64_t index) {
  const int m = axis.size();
  std::vector<Alternative> worst_first;
  int left = 0;
  int right = m - 1;
  for (int k = 1; k < m; ++k) {
    const bool take_right = (index >> (m - 1 - k)) & 1u;
    worst_first.push_back(take_right ? axis.at(right--) : axis.at(left++));
  }
  worst_first.push_back(axis.at(left));
  std::reverse(worst_first.begin(), worst_first.end());
  return LinearOrder::from_ranking(worst_first);
}

std::vector<LinearOrder> generate_single_peaked(const LinearOrder& axis) {
  const std::uint64_t count = std::uint64_t{1} << (axis.size() - 1);
  std::vector<LinearOrder> out;
  out.reserve(count);
  for (std::uint64_t b = 0; b < count; ++b) out.push_back(single_peaked_from_bits(axis, b));
  return out;
}

bool is_single_peaked(const LinearOrder& order, const LinearOrder& axis) {
  if (order.size() != axis.size()) return false;
  const int m = axis.size();
  const int peak = axis.position(order.top());
  for (int k = 0; k < m; ++k) {
    if (k < peak && !order.prefers(axis.at(k + 1), axis.at(k))) return false;
    if (k > peak && !order.prefers(axis.at(k - 1), axis.at(k))) return false;
  }
  return true;
}

}  // namespace devaudit
