#include "xlate/core/types.hpp"

namespace xlate::core {

const char* fragment_kind_name(FragmentKind k) {
    switch (k) {
    case FragmentKind::Function: return "function";
    case FragmentKind::Method: return "method";
    case FragmentKind::Class: return "class";
    case FragmentKind::Struct: return "struct";
    case FragmentKind::Interface: return "interface";
    case FragmentKind::Global: return "global";
    }
    return "function";
}

std::optional<FragmentKind> fragment_kind_from_name(const std::string& name) {
    if (name == "function") return FragmentKind::Function;
    if (name == "method") return FragmentKind::Method;
    if (name == "class") return FragmentKind::Class;
    if (name == "struct") return FragmentKind::Struct;
    if (name == "interface") return FragmentKind::Interface;
    if (name == "global") return FragmentKind::Global;
    return std::nullopt;
}

std::string fragment_identity(const Fragment& f) {
    return f.file + ":" + f.qualified_name;
}

std::optional<std::pair<std::string, std::string>> parse_fragment_identity(const std::string& id) {
    auto pos = id.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= id.size()) return std::nullopt;
    return std::make_pair(id.substr(0, pos), id.substr(pos + 1));
}

} // namespace xlate::core
