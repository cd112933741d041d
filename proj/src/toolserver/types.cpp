#include "xlate/toolserver/types.hpp"

#include <nlohmann/json.hpp>

namespace xlate::toolserver {

const char* severity_name(Severity s) {
    switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
    case Severity::Hint: return "hint";
    }
    return "error";
}

std::optional<Severity> severity_from_name(const std::string& name) {
    if (name == "error") return Severity::Error;
    if (name == "warning") return Severity::Warning;
    if (name == "info") return Severity::Info;
    if (name == "hint") return Severity::Hint;
    return std::nullopt;
}

const char* tool_error_kind_name(ToolError::Kind k) {
    switch (k) {
    case ToolError::Kind::NotFound: return "not_found";
    case ToolError::Kind::InvalidEdit: return "invalid_edit";
    case ToolError::Kind::CapabilityUnavailable: return "capability_unavailable";
    case ToolError::Kind::Timeout: return "timeout";
    case ToolError::Kind::Internal: return "internal";
    }
    return "internal";
}

nlohmann::json position_to_json(const FilePosition& p) {
    return {{"file", p.file}, {"line", p.line}, {"column", p.column}};
}

FilePosition position_from_json(const nlohmann::json& j) {
    FilePosition p;
    p.file = j.at("file").get<std::string>();
    p.line = j.at("line").get<int>();
    p.column = j.at("column").get<int>();
    if (p.line < 1 || p.column < 1) {
        throw ToolError(ToolError::Kind::InvalidEdit, "positions are 1-based");
    }
    return p;
}

nlohmann::json diagnostic_to_json(const Diagnostic& d) {
    return {{"file", d.file},
            {"start_line", d.start_line},
            {"start_column", d.start_column},
            {"end_line", d.end_line},
            {"end_column", d.end_column},
            {"severity", severity_name(d.severity)},
            {"message", d.message},
            {"source", d.source}};
}

namespace {

nlohmann::json entries_to_json(const std::vector<SkeletonEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        arr.push_back({{"name", e.name},
                       {"kind", e.kind},
                       {"start_line", e.start_line},
                       {"end_line", e.end_line}});
    }
    return arr;
}

std::vector<SkeletonEntry> entries_from_json(const nlohmann::json& arr) {
    std::vector<SkeletonEntry> out;
    for (const auto& e : arr) {
        out.push_back({e.at("name").get<std::string>(), e.at("kind").get<std::string>(),
                       e.at("start_line").get<int>(), e.at("end_line").get<int>()});
    }
    return out;
}

} // namespace

nlohmann::json skeleton_to_json(const SkeletonRecord& r) {
    nlohmann::json j = {{"filepath", r.filepath},
                        {"language", r.language},
                        {"skeleton",
                         {{"imports", entries_to_json(r.imports)},
                          {"classes", entries_to_json(r.classes)},
                          {"functions", entries_to_json(r.functions)},
                          {"globals", entries_to_json(r.globals)},
                          {"structs", entries_to_json(r.structs)}}}};
    if (!r.parse_ok) {
        j["parse_ok"] = false;
        j["parse_message"] = r.parse_message;
    }
    return j;
}

SkeletonRecord skeleton_from_json(const nlohmann::json& j) {
    SkeletonRecord r;
    r.filepath = j.at("filepath").get<std::string>();
    r.language = j.at("language").get<std::string>();
    const auto& s = j.at("skeleton");
    r.imports = entries_from_json(s.at("imports"));
    r.classes = entries_from_json(s.at("classes"));
    r.functions = entries_from_json(s.at("functions"));
    r.globals = entries_from_json(s.at("globals"));
    r.structs = entries_from_json(s.at("structs"));
    if (j.contains("parse_ok")) {
        r.parse_ok = j["parse_ok"].get<bool>();
        r.parse_message = j.value("parse_message", "");
    }
    return r;
}

} // namespace xlate::toolserver
