#pragma once

#include "xlate/core/config.hpp"
#include "xlate/core/types.hpp"
#include "xlate/toolserver/lsp_client.hpp"
#include "xlate/toolserver/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace xlate::toolserver {

struct DefinitionResult {
    std::string body;        // full text of the defining construct
    core::Fragment fragment; // file + kind + qualified name + span
};

struct HoverResult {
    bool found = false; // false = nothing at position (not an error)
    std::string text;   // plain text: signature + docstring
};

struct RenameResult {
    int files_changed = 0;
    int edits_applied = 0;
};

struct DirectoryTreeResult {
    nlohmann::json tree;
    std::string rendered;
};

// The eight static-analysis methods over a single workspace. LSP-backed
// methods lazily launch one language-server subprocess; the two
// project-analysis methods and edit_file work without one.
class ToolserverCore {
public:
    struct Options {
        std::string root; // absolute workspace root
        core::LanguageProfile profile;
        // Test seam: launch this argv instead of profile.lsp_launch.
        std::vector<std::string> lsp_argv_override;
        long request_timeout_ms = 15000;
        int max_restarts = 3;
        long backoff_base_ms = 200;
        // Profile settle windows can be overridden for fast tests.
        std::optional<double> settle_seconds_override;
        std::optional<double> cap_seconds_override;
    };
    explicit ToolserverCore(Options opts);
    ~ToolserverCore();

    DefinitionResult definition(const std::variant<std::string, FilePosition>& target);
    std::vector<Diagnostic> diagnostics(const std::string& rel_file);
    size_t edit_file(const std::string& rel_file, const std::vector<TextEdit>& edits);
    HoverResult hover(const FilePosition& pos);
    std::vector<FilePosition> references(const FilePosition& pos, bool include_declaration = true);
    RenameResult rename_symbol(const FilePosition& pos, const std::string& new_name);
    DirectoryTreeResult get_directory_tree(const std::vector<std::string>& exclude = {});
    SkeletonRecord file_structure(const std::string& rel_file);

    // JSON-RPC dispatch used by the server and by agent tool brokers.
    // Throws ToolError on tool failures; std::invalid_argument on bad params.
    nlohmann::json dispatch(const std::string& method, const nlohmann::json& params);
    static const std::vector<std::string>& method_names();

    const std::string& root() const { return root_; }
    const core::LanguageProfile& profile() const { return profile_; }

private:
    std::string read_workspace_file(const std::string& rel) const;
    void ensure_document_open(const std::string& rel);
    LspClient& lsp();
    nlohmann::json lsp_request(const std::string& method, nlohmann::json params);
    DefinitionResult fragment_at(const FilePosition& decl_pos, const std::string& fallback_name);

    std::string root_;
    core::LanguageProfile profile_;
    double settle_seconds_;
    double cap_seconds_;
    std::unique_ptr<LspManager> manager_;
};

// Plain-text rendering of an LSP hover payload (MarkupContent, MarkedString,
// or an array of either): code fences dropped, text kept verbatim.
std::string render_hover_text(const nlohmann::json& contents);

// Identifier validity per language, including reserved-word rejection.
bool valid_identifier(const std::string& language, const std::string& name);

} // namespace xlate::toolserver
