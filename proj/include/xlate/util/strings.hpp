#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xlate::util {

std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_lines(std::string_view text);
std::string trim(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view text);
bool contains(std::string_view text, std::string_view needle);

/// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string text, std::string_view from, std::string_view to);

} // namespace xlate::util
