#pragma once

#include <string_view>

namespace xlate::util {

/// Shell-style glob over normalized relative paths.
/// `*` and `?` do not cross '/'; `**` matches any number of segments.
bool glob_match(std::string_view pattern, std::string_view path);

} // namespace xlate::util
