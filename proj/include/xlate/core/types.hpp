#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xlate::core {

// Short lowercase language identifier ("go", "python", ...). Must match a
// configured LanguageProfile to be usable.
using LanguageId = std::string;

// Per-language plumbing: how to find files, launch a language server, and
// run builds/tests/coverage. Command templates may only reference the
// placeholders {root}, {file}, {filter}.
struct LanguageProfile {
    LanguageId language;
    std::vector<std::string> file_extensions;  // e.g. [".go"]
    std::vector<std::string> lsp_launch;       // argv template
    std::vector<std::string> build_command;    // argv template
    std::vector<std::string> test_command;     // argv template
    std::vector<std::string> coverage_command; // argv template; emits normalized coverage on stdout
    // Which machine-readable schema test_command prints on stdout. One of
    // "jsonl" (our adapter format), "tap", or "go-test-json". Free-text
    // runner output is deliberately unsupported.
    std::string test_output_format = "jsonl";
    std::vector<std::string> stub_markers;     // substrings marking an unimplemented body
    std::string line_comment;                  // e.g. "//" or "#"
    std::string block_comment_open;            // may be empty
    std::string block_comment_close;

    // Test/manifest detection, overriding the global conventions when set.
    std::vector<std::string> test_globs;
    std::vector<std::string> test_prefixes;   // basename prefixes, e.g. "test_"
    std::vector<std::string> test_suffixes;   // stem suffixes, e.g. "_test"
    std::vector<std::string> manifest_globs;  // e.g. "go.mod", "requirements.txt"

    // How long to let diagnostics settle after an edit before reading them.
    double diagnostics_settle_seconds = 2.0;
    double diagnostics_cap_seconds = 30.0;
};

// A repository snapshot in one language: source files, test files, and
// dependency manifests, all root-relative and normalized.
struct Project {
    std::string root;
    LanguageId language;
    std::vector<std::string> source_files;
    std::vector<std::string> test_files;
    std::vector<std::string> dependency_manifests;
};

// One translation unit: a named construct with its file and line span.
enum class FragmentKind { Function, Method, Class, Struct, Interface, Global };

const char* fragment_kind_name(FragmentKind k);
std::optional<FragmentKind> fragment_kind_from_name(const std::string& name);

struct Fragment {
    std::string file;             // root-relative path
    FragmentKind kind = FragmentKind::Function;
    std::string qualified_name;   // dotted symbol path, e.g. "T.M"
    int start_line = 1;           // 1-based inclusive
    int end_line = 1;             // 1-based inclusive

    bool operator==(const Fragment&) const = default;
};

// Identity string "<file>:<qualified_name>". The file may itself contain
// ':' in pathological cases, so parsing splits at the LAST ':'.
std::string fragment_identity(const Fragment& f);
std::optional<std::pair<std::string, std::string>> parse_fragment_identity(const std::string& id);

// Orchestration limits: per-agent wall-clock budget and repair iterations.
struct RunBudget {
    double agent_timeout_seconds = 5000.0;
    int max_iterations = 5;
};

// Per-token dollar rates, defaulting to zero (cost reporting disabled).
struct RateTable {
    double input_per_token = 0.0;
    double output_per_token = 0.0;
};

} // namespace xlate::core
