#pragma once

#include <string>
#include <utility>
#include <string_view>
#include <vector>

namespace devaudit::text {

std::string_view trim(std::string_view s);

/// Content line of a line-based input file, with `#` comments stripped.
struct Line {
  std::size_t number;  // 1-based
  std::string_view content;
};

/// Splits into non-blank lines, dropping comments and surrounding space.
std::vector<Line> content_lines(std::string_view text);

/// Whitespace-separated tokens.
std::vector<std::string_view> split_ws(std::string_view s);

/// Splits on a single character, trimming each piece.
std::vector<std::string_view> split(std::string_view s, char sep);

bool starts_with(std::string_view s, std::string_view prefix);

/// If `line` starts with `key` followed by ':', returns the trimmed rest.
bool take_key(std::string_view line, std::string_view key, std::string_view& rest);

/// Parses "(a,b) (c,d) ..." with state ids checked by is_valid_state_id.
/// Throws SyntaxError at `line`.
std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view s, std::size_t line);

}  // namespace devaudit::text
