#include "devaudit/coalition.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "devaudit/error.hpp"

namespace devaudit {

Coalition Coalition::from_mask(std::uint32_t mask) {
  if (mask >> kMaxAgents) raise(ErrorCode::OutOfRangeAgent, "coalition mask exceeds agent bound");
  return Coalition(mask);
}

Coalition Coalition::of(std::initializer_list<int> agents) {
  return of(std::vector<int>(agents));
}

Coalition Coalition::of(const std::vector<int>& agents) {
  std::uint32_t mask = 0;
  for (int a : agents) mask |= singleton(a).mask_;
  return Coalition(mask);
}

Coalition Coalition::singleton(int agent) {
  if (agent < 1 || agent > kMaxAgents) {
    raise(ErrorCode::OutOfRangeAgent, "agent " + std::to_string(agent) + " out of range");
  }
  return Coalition(1u << (agent - 1));
}

Coalition Coalition::grand(int agents) {
  check_agent_count(agents);
  return Coalition(agents == 0 ? 0u : ((1u << agents) - 1u));
}

int Coalition::size() const noexcept { return std::popcount(mask_); }

bool Coalition::contains(int agent) const noexcept {
  return agent >= 1 && agent <= kMaxAgents && ((mask_ >> (agent - 1)) & 1u);
}

int Coalition::max_agent() const noexcept { return mask_ == 0 ? 0 : std::bit_width(mask_); }

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (int i = 0; i < kMaxAgents; ++i) {
    if ((mask_ >> i) & 1u) out.push_back(i + 1);
  }
  return out;
}

Coalition Coalition::complement(int agents) const noexcept {
  const std::uint32_t all = agents <= 0 ? 0u : ((1u << agents) - 1u);
  return Coalition(all & ~mask_);
}

std::string Coalition::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int m : members()) {
    if (!first) out += ',';
    out += std::to_string(m);
    first = false;
  }
  out += '}';
  return out;
}

bool label_less(Coalition a, Coalition b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto ma = a.members();
  const auto mb = b.members();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

std::vector<Coalition> all_labels(int agents) {
  check_agent_count(agents);
  std::vector<Coalition> out;
  out.reserve(std::size_t{1} << agents);
  for (std::uint32_t m = 0; m < (1u << agents); ++m) out.push_back(Coalition::from_mask(m));
  std::sort(out.begin(), out.end(), label_less);
  return out;
}

Coalition parse_coalition(std::string_view text, int agents) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i >= text.size() || text[i] != '{') throw SyntaxError(i, false, "expected '{'");
  ++i;
  std::uint32_t mask = 0;
  skip();
  if (i < text.size() && text[i] == '}') {
    ++i;
  } else {
    while (true) {
      skip();
      const std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) throw SyntaxError(i, false, "expected agent number");
      const int agent = std::stoi(std::string(text.substr(start, i - start)));
      if (agent < 1 || agent > agents) {
        raise(ErrorCode::OutOfRangeAgent,
              "agent " + std::to_string(agent) + " outside 1.." + std::to_string(agents));
      }
      mask |= 1u << (agent - 1);
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == '}') {
        ++i;
        break;
      }
      throw SyntaxError(i, false, "expected ',' or '}'");
    }
  }
  skip();
  if (i != text.size()) throw SyntaxError(i, false, "trailing characters after coalition");
  return Coalition::from_mask(mask);
}

void check_agent_count(int agents) {
  if (agents < 1 || agents > kMaxAgents) {
    raise(ErrorCode::OutOfRangeAgent,
          "agent count " + std::to_string(agents) + " outside 1.." + std::to_string(kMaxAgents));
  }
}

}  // namespace devaudit
