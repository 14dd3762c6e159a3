#include "devaudit/domain.hpp"

#include <limits>

#include "devaudit/error.hpp"
#include "text.hpp"

namespace devaudit {

namespace {

constexpr int kMaxUniversalAlternatives = 9;

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

DomainSpec DomainSpec::universal() { return DomainSpec{}; }

DomainSpec DomainSpec::single_peaked(LinearOrder axis) {
  DomainSpec d;
  d.kind = Kind::SinglePeaked;
  d.axis = std::move(axis);
  return d;
}

DomainSpec DomainSpec::product(std::vector<std::vector<LinearOrder>> per_agent) {
  DomainSpec d;
  d.kind = Kind::Product;
  d.options = std::move(per_agent);
  return d;
}

DomainSpec DomainSpec::list(std::vector<Profile> profiles) {
  DomainSpec d;
  d.kind = Kind::List;
  d.profiles = std::move(profiles);
  return d;
}

std::string DomainSpec::describe(const AlternativeSet& alts) const {
  switch (kind) {
    case Kind::Universal: return "universal";
    case Kind::SinglePeaked: return "singlepeaked " + axis.axis_text(alts);
    case Kind::Product: return "product";
    case Kind::List: return "list(" + std::to_string(profiles.size()) + ")";
  }
  return "?";
}

DomainSpec parse_domain(std::string_view input, const AlternativeSet& alts, int agents) {
  const auto lines = text::content_lines(input);
  if (lines.empty()) raise(ErrorCode::InvalidArgument, "empty domain description");
  std::string_view head = lines.front().content;
  if (text::starts_with(head, "domain ")) head = text::trim(head.substr(7));

  if (head == "universal") {
    if (lines.size() > 1) throw SyntaxError(lines[1].number, true, "unexpected content after 'universal'");
    return DomainSpec::universal();
  }
  if (text::starts_with(head, "singlepeaked")) {
    if (lines.size() > 1) throw SyntaxError(lines[1].number, true, "unexpected content after the axis");
    return DomainSpec::single_peaked(parse_axis(text::trim(head.substr(12)), alts));
  }
  if (head == "list") {
    std::vector<Profile> profiles;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      std::string_view rest;
      if (!text::take_key(lines[k].content, "profile", rest)) {
        throw SyntaxError(lines[k].number, true, "expected 'profile: <order>; ...'");
      }
      profiles.push_back(parse_profile(rest, alts, agents));
    }
    if (profiles.empty()) raise(ErrorCode::InvalidArgument, "listed domain has no profiles");
    return DomainSpec::list(std::move(profiles));
  }
  if (head == "product") {
    std::vector<std::vector<LinearOrder>> per_agent(static_cast<std::size_t>(agents));
    std::vector<bool> seen(static_cast<std::size_t>(agents), false);
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto line = lines[k].content;
      const auto colon = line.find(':');
      const auto words = text::split_ws(line.substr(0, colon == std::string_view::npos ? 0 : colon));
      if (colon == std::string_view::npos || words.size() != 2 || words[0] != "agent") {
        throw SyntaxError(lines[k].number, true, "expected 'agent <i>: <order> ; <order> ...'");
      }
      int agent = 0;
      try {
        agent = std::stoi(std::string(words[1]));
      } catch (const std::exception&) {
        throw SyntaxError(lines[k].number, true, "bad agent number");
      }
      if (agent < 1 || agent > agents) raise(ErrorCode::OutOfRangeAgent, "agent " + std::to_string(agent) + " out of range");
      if (seen[static_cast<std::size_t>(agent - 1)]) throw SyntaxError(lines[k].number, true, "duplicate agent line");
      seen[static_cast<std::size_t>(agent - 1)] = true;
      for (auto part : text::split(line.substr(colon + 1), ';')) {
        per_agent[static_cast<std::size_t>(agent - 1)].push_back(parse_order(part, alts));
      }
    }
    for (int i = 0; i < agents; ++i) {
      if (per_agent[static_cast<std::size_t>(i)].empty()) {
        raise(ErrorCode::InvalidArgument, "product domain lists no orders for agent " + std::to_string(i + 1));
      }
    }
    return DomainSpec::product(std::move(per_agent));
  }
  throw SyntaxError(lines.front().number, true, "unknown domain kind '" + std::string(head) + "'");
}

// ------------------------------------------------------------- ProfileSpace

ProfileSpace::ProfileSpace(DomainSpec spec, int agents, AlternativeSet alts, std::vector<Profile> extra)
    : spec_(std::move(spec)), agents_(agents), alts_(std::move(alts)) {
  check_agent_count(agents_);
  const int m = alts_.size();
  switch (spec_.kind) {
    case DomainSpec::Kind::Universal: {
      if (m > kMaxUniversalAlternatives) {
        raise(ErrorCode::BudgetExceeded, "universal domain over more than " +
                                             std::to_string(kMaxUniversalAlternatives) + " alternatives");
      }
      const auto orders = all_orders(m);
      options_.assign(static_cast<std::size_t>(agents_), orders);
      product_ = true;
      break;
    }
    case DomainSpec::Kind::SinglePeaked: {
      if (spec_.axis.size() != m) raise(ErrorCode::InvalidArgument, "axis does not cover the alternatives");
      const auto orders = generate_single_peaked(spec_.axis);
      options_.assign(static_cast<std::size_t>(agents_), orders);
      product_ = true;
      break;
    }
    case DomainSpec::Kind::Product:
      if (static_cast<int>(spec_.options.size()) != agents_) {
        raise(ErrorCode::InvalidArgument, "product domain must list orders for every agent");
      }
      options_ = spec_.options;
      product_ = true;
      break;
    case DomainSpec::Kind::List:
      for (const auto& p : spec_.profiles) {
        if (static_cast<int>(p.size()) != agents_) raise(ErrorCode::InvalidArgument, "listed profile has wrong length");
        if (!list_lookup_.emplace(p, list_lookup_.size()).second) {
          raise(ErrorCode::InvalidArgument, "duplicate profile in listed domain");
        }
      }
      base_size_ = spec_.profiles.size();
      break;
  }
  if (product_) {
    option_lookup_.resize(options_.size());
    base_size_ = 1;
    for (std::size_t i = 0; i < options_.size(); ++i) {
      if (options_[i].empty()) raise(ErrorCode::InvalidArgument, "agent with no admissible orders");
      for (std::size_t k = 0; k < options_[i].size(); ++k) {
        if (options_[i][k].size() != m) raise(ErrorCode::InvalidArgument, "order over the wrong alternatives");
        if (!option_lookup_[i].emplace(options_[i][k], static_cast<int>(k)).second) {
          raise(ErrorCode::InvalidArgument, "duplicate order for agent " + std::to_string(i + 1));
        }
      }
      base_size_ = saturating_mul(base_size_, options_[i].size());
    }
  }
  for (auto& p : extra) {
    if (static_cast<int>(p.size()) != agents_) raise(ErrorCode::InvalidArgument, "extra row has wrong length");
    if (in_base(p) || extra_lookup_.count(p)) continue;
    extra_lookup_.emplace(p, extra_.size());
    extra_.push_back(std::move(p));
  }
}

std::uint64_t ProfileSpace::size() const noexcept {
  const auto extra = static_cast<std::uint64_t>(extra_.size());
  if (base_size_ > std::numeric_limits<std::uint64_t>::max() - extra) return std::numeric_limits<std::uint64_t>::max();
  return base_size_ + extra;
}

const std::vector<LinearOrder>& ProfileSpace::options(int agent) const {
  if (!product_) raise(ErrorCode::InvalidArgument, "listed domain has no per-agent options");
  return options_.at(static_cast<std::size_t>(agent - 1));
}

std::optional<int> ProfileSpace::option_index(int agent, const LinearOrder& o) const {
  const auto& lookup = option_lookup_[static_cast<std::size_t>(agent - 1)];
  auto it = lookup.find(o);
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

Profile ProfileSpace::profile(std::uint64_t index) const {
  if (index >= base_size_) {
    const auto k = index - base_size_;
    if (k >= extra_.size()) raise(ErrorCode::InvalidArgument, "profile index out of range");
    return extra_[k];
  }
  if (!product_) return spec_.profiles[index];
  Profile out(static_cast<std::size_t>(agents_));
  for (int i = agents_ - 1; i >= 0; --i) {
    const auto& opts = options_[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = opts[index % opts.size()];
    index /= opts.size();
  }
  return out;
}

bool ProfileSpace::in_base(const Profile& p) const {
  if (static_cast<int>(p.size()) != agents_) return false;
  if (!product_) return list_lookup_.count(p) > 0;
  for (int i = 1; i <= agents_; ++i) {
    if (!option_index(i, p[static_cast<std::size_t>(i - 1)])) return false;
  }
  return true;
}

std::optional<std::uint64_t> ProfileSpace::index_of(const Profile& p) const {
  if (static_cast<int>(p.size()) != agents_) return std::nullopt;
  if (auto it = extra_lookup_.find(p); it != extra_lookup_.end()) return base_size_ + it->second;
  if (!product_) {
    auto it = list_lookup_.find(p);
    if (it == list_lookup_.end()) return std::nullopt;
    return it->second;
  }
  std::uint64_t index = 0;
  for (int i = 1; i <= agents_; ++i) {
    const auto k = option_index(i, p[static_cast<std::size_t>(i - 1)]);
    if (!k) return std::nullopt;
    index = index * options_[static_cast<std::size_t>(i - 1)].size() + static_cast<std::uint64_t>(*k);
  }
  return index;
}

void ProfileSpace::for_each_deviation(const Profile& p, Coalition c,
                                      const std::function<bool(const Profile&, std::uint64_t)>& visit) const {
  if (static_cast<int>(p.size()) != agents_) return;
  if (product_) {
    bool fixed_ok = true;
    for (int i = 1; i <= agents_; ++i) {
      if (!c.contains(i) && !option_index(i, p[static_cast<std::size_t>(i - 1)])) fixed_ok = false;
    }
    if (fixed_ok) {
      const auto members = c.members();
      std::vector<std::size_t> digit(members.size(), 0);
      Profile q = p;
      for (std::size_t k = 0; k < members.size(); ++k) {
        q[static_cast<std::size_t>(members[k] - 1)] = options_[static_cast<std::size_t>(members[k] - 1)][0];
      }
      bool more = true;
      while (more) {
        if (!visit(q, *index_of(q))) return;
        // Odometer with the last member as the fastest digit.
        more = false;
        for (std::size_t k = members.size(); k-- > 0;) {
          const auto agent = static_cast<std::size_t>(members[k] - 1);
          if (++digit[k] < options_[agent].size()) {
            q[agent] = options_[agent][digit[k]];
            more = true;
            break;
          }
          digit[k] = 0;
          q[agent] = options_[agent][0];
        }
      }
    }
  } else {
    for (std::uint64_t k = 0; k < spec_.profiles.size(); ++k) {
      if (agrees_outside(p, spec_.profiles[k], c) && !visit(spec_.profiles[k], k)) return;
    }
  }
  for (std::size_t k = 0; k < extra_.size(); ++k) {
    if (agrees_outside(p, extra_[k], c) && !visit(extra_[k], base_size_ + k)) return;
  }
}

void ProfileSpace::for_each(const std::function<bool(const Profile&, std::uint64_t)>& visit) const {
  const auto n = size();
  for (std::uint64_t k = 0; k < n; ++k) {
    if (!visit(profile(k), k)) return;
  }
}

bool space_subset(const ProfileSpace& inner, const ProfileSpace& outer) {
  if (outer.spec().kind == DomainSpec::Kind::Universal && inner.alternatives() == outer.alternatives() &&
      inner.agents() == outer.agents()) {
    return true;
  }
  bool ok = true;
  inner.for_each([&](const Profile& p, std::uint64_t) {
    ok = outer.contains(p);
    return ok;
  });
  return ok;
}

}  // namespace devaudit
