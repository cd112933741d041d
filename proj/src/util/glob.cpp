#include "xlate/util/glob.hpp"

#include <string>

namespace xlate::util {

namespace {

bool match_here(std::string_view p, std::string_view s) {
    if (p.empty()) return s.empty();
    if (p.size() >= 2 && p[0] == '*' && p[1] == '*') {
        // Collapse "**" plus an optional following slash; it may consume
        // any prefix of s including slashes.
        std::string_view rest = p.substr(2);
        if (!rest.empty() && rest[0] == '/') rest.remove_prefix(1);
        for (size_t i = 0; i <= s.size(); ++i) {
            if (match_here(rest, s.substr(i))) return true;
        }
        return false;
    }
    switch (p[0]) {
    case '*':
        for (size_t i = 0; i <= s.size(); ++i) {
            if (i > 0 && s[i - 1] == '/') break;
            if (match_here(p.substr(1), s.substr(i))) return true;
        }
        return false;
    case '?':
        return !s.empty() && s[0] != '/' && match_here(p.substr(1), s.substr(1));
    default:
        return !s.empty() && s[0] == p[0] && match_here(p.substr(1), s.substr(1));
    }
}

} // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
    return match_here(pattern, path);
}

} // namespace xlate::util
