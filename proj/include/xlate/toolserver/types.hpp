#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace xlate::toolserver {

// Public coordinates are 1-based lines and columns, matching what a human
// sees in an editor gutter. Conversion to the 0-based wire coordinates of
// the language-server protocol happens inside the LSP client only.
struct FilePosition {
    std::string file; // workspace-relative
    int line = 1;
    int column = 1;

    bool operator==(const FilePosition&) const = default;
    auto operator<=>(const FilePosition&) const = default;
};

// Replaces the half-open range [start, end) with `replacement`. All ranges
// in one batch refer to the original (pre-edit) file contents.
struct TextEdit {
    FilePosition start;
    FilePosition end;
    std::string replacement;
};

enum class Severity { Error, Warning, Info, Hint };

const char* severity_name(Severity s);
std::optional<Severity> severity_from_name(const std::string& name);

struct Diagnostic {
    std::string file;
    int start_line = 1;
    int start_column = 1;
    int end_line = 1;
    int end_column = 1;
    Severity severity = Severity::Error;
    std::string message;
    std::string source; // producing tool, e.g. the language server's name
};

// One named construct found by a grammar adapter.
struct SkeletonEntry {
    std::string name; // qualified (dotted) within the file
    std::string kind; // function | method | class | interface | struct | global | import
    int start_line = 1;
    int end_line = 1;

    bool operator==(const SkeletonEntry&) const = default;
};

// The five-category structural skeleton of one file. Interfaces live in
// `classes` with kind "interface"; methods live in `functions` with kind
// "method" and a Type.name qualified name.
struct SkeletonRecord {
    std::string filepath;
    std::string language;
    std::vector<SkeletonEntry> imports;
    std::vector<SkeletonEntry> classes;
    std::vector<SkeletonEntry> functions;
    std::vector<SkeletonEntry> globals;
    std::vector<SkeletonEntry> structs;
    bool parse_ok = true;
    std::string parse_message;
};

struct DirTreeNode {
    std::string name;
    bool is_dir = false;
    std::vector<DirTreeNode> children; // directories first, then files
};

// Structured tool failures that must cross the JSON-RPC boundary with a
// machine-readable kind.
struct ToolError : std::runtime_error {
    enum class Kind {
        NotFound,              // file or symbol missing
        InvalidEdit,           // overlap / out-of-bounds / bad identifier
        CapabilityUnavailable, // no LSP for the language, or retry budget spent
        Timeout,               // settle window or request deadline exceeded
        Internal,
    };
    Kind kind;
    ToolError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

const char* tool_error_kind_name(ToolError::Kind k);

nlohmann::json position_to_json(const FilePosition& p);
FilePosition position_from_json(const nlohmann::json& j);
nlohmann::json diagnostic_to_json(const Diagnostic& d);
nlohmann::json skeleton_to_json(const SkeletonRecord& r);
SkeletonRecord skeleton_from_json(const nlohmann::json& j);

} // namespace xlate::toolserver
