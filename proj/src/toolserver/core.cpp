#include "xlate/toolserver/core.hpp"

#include "xlate/toolserver/dirtree.hpp"
#include "xlate/toolserver/editor.hpp"
#include "xlate/toolserver/structure.hpp"
#include "xlate/util/fs.hpp"
#include "xlate/util/strings.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <functional>
#include <set>

namespace fs = std::filesystem;

namespace xlate::toolserver {

namespace {

long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

const std::set<std::string>& keywords_for(const std::string& language) {
    static const std::set<std::string> go_kw = {
        "break",  "case",   "chan",        "const", "continue", "default",
        "defer",  "else",   "fallthrough", "for",   "func",     "go",
        "goto",   "if",     "import",      "interface", "map",  "package",
        "range",  "return", "select",      "struct", "switch",  "type", "var"};
    static const std::set<std::string> py_kw = {
        "False", "None",  "True",    "and",    "as",     "assert", "async",
        "await", "break", "class",   "continue", "def",  "del",    "elif",
        "else",  "except", "finally", "for",   "from",   "global", "if",
        "import", "in",   "is",      "lambda", "nonlocal", "not",  "or",
        "pass",  "raise", "return",  "try",    "while",  "with",   "yield"};
    static const std::set<std::string> none;
    if (language == "go") return go_kw;
    if (language == "python") return py_kw;
    return none;
}

} // namespace

bool valid_identifier(const std::string& language, const std::string& name) {
    if (name.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(name[0]))) return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return keywords_for(language).count(name) == 0;
}

std::string render_hover_text(const nlohmann::json& contents) {
    std::vector<std::string> pieces;
    std::function<void(const nlohmann::json&)> collect = [&](const nlohmann::json& c) {
        if (c.is_string()) {
            pieces.push_back(c.get<std::string>());
        } else if (c.is_object() && c.contains("value")) {
            pieces.push_back(c["value"].get<std::string>());
        } else if (c.is_array()) {
            for (const auto& e : c) collect(e);
        }
    };
    collect(contents);
    std::string joined = util::join(pieces, "\n");
    // Drop pure code-fence marker lines, keep their contents.
    std::vector<std::string> kept;
    for (auto& line : util::split_lines(joined)) {
        if (util::trim(line).rfind("```", 0) == 0) continue;
        kept.push_back(line);
    }
    while (!kept.empty() && util::trim(kept.back()).empty()) kept.pop_back();
    return util::join(kept, "\n");
}

ToolserverCore::ToolserverCore(Options opts)
    : root_(fs::absolute(opts.root).lexically_normal().string()),
      profile_(std::move(opts.profile)) {
    settle_seconds_ = opts.settle_seconds_override.value_or(profile_.diagnostics_settle_seconds);
    cap_seconds_ = opts.cap_seconds_override.value_or(profile_.diagnostics_cap_seconds);

    std::vector<std::string> argv = opts.lsp_argv_override;
    if (argv.empty() && !profile_.lsp_launch.empty()) {
        argv = core::expand_command(profile_.lsp_launch, root_);
    }
    LspManager::Options mopts;
    mopts.launch.argv = std::move(argv);
    mopts.launch.root = root_;
    mopts.launch.language_id = profile_.language;
    mopts.launch.request_timeout_ms = opts.request_timeout_ms;
    mopts.max_restarts = opts.max_restarts;
    mopts.backoff_base_ms = opts.backoff_base_ms;
    manager_ = std::make_unique<LspManager>(std::move(mopts));
}

ToolserverCore::~ToolserverCore() {
    if (manager_) manager_->shutdown();
}

std::string ToolserverCore::read_workspace_file(const std::string& rel) const {
    std::string norm = util::normalize_rel(rel);
    if (norm.empty() || norm.rfind("..", 0) == 0) {
        throw ToolError(ToolError::Kind::NotFound, "path escapes the workspace: " + rel);
    }
    fs::path abs = fs::path(root_) / norm;
    if (!fs::is_regular_file(abs)) {
        throw ToolError(ToolError::Kind::NotFound, "no such file in workspace: " + norm);
    }
    return util::read_file(abs);
}

LspClient& ToolserverCore::lsp() { return manager_->ensure(); }

nlohmann::json ToolserverCore::lsp_request(const std::string& method, nlohmann::json params) {
    return manager_->request(method, std::move(params));
}

void ToolserverCore::ensure_document_open(const std::string& rel) {
    std::string text = read_workspace_file(rel);
    lsp().open_document(util::normalize_rel(rel), text);
}

DefinitionResult ToolserverCore::fragment_at(const FilePosition& decl_pos,
                                             const std::string& fallback_name) {
    std::string text = read_workspace_file(decl_pos.file);
    auto lines = util::split_lines(text);

    const GrammarAdapter* adapter = adapter_for(profile_.language);
    std::optional<core::Fragment> best;
    if (adapter) {
        SkeletonRecord rec = adapter->scan(decl_pos.file, text);
        for (const auto& frag : skeleton_fragments(rec)) {
            if (decl_pos.line < frag.start_line || decl_pos.line > frag.end_line) continue;
            if (!best || (frag.end_line - frag.start_line) < (best->end_line - best->start_line)) {
                best = frag;
            }
        }
    }
    core::Fragment frag;
    if (best) {
        frag = *best;
    } else {
        frag.file = decl_pos.file;
        frag.kind = core::FragmentKind::Function;
        frag.qualified_name = fallback_name.empty() ? "?" : fallback_name;
        frag.start_line = decl_pos.line;
        frag.end_line = decl_pos.line;
    }

    std::string body;
    for (int l = frag.start_line; l <= frag.end_line && l <= static_cast<int>(lines.size()); ++l) {
        body += lines[static_cast<size_t>(l) - 1];
        body += "\n";
    }
    return {body, frag};
}

DefinitionResult ToolserverCore::definition(const std::variant<std::string, FilePosition>& target) {
    nlohmann::json location;
    std::string fallback_name;

    if (std::holds_alternative<std::string>(target)) {
        const std::string& symbol = std::get<std::string>(target);
        fallback_name = symbol;
        nlohmann::json result = lsp_request("workspace/symbol", {{"query", symbol}});
        if (!result.is_array() || result.empty()) {
            throw ToolError(ToolError::Kind::NotFound, "unresolved symbol: " + symbol);
        }
        // First exact name match; ties broken by lexicographic file path.
        std::string last_component = symbol;
        if (auto dot = symbol.rfind('.'); dot != std::string::npos) {
            last_component = symbol.substr(dot + 1);
        }
        std::vector<nlohmann::json> exact;
        for (const auto& s : result) {
            std::string name = s.value("name", "");
            if (name == symbol || name == last_component) exact.push_back(s);
        }
        if (exact.empty()) {
            throw ToolError(ToolError::Kind::NotFound, "no exact match for symbol: " + symbol);
        }
        std::sort(exact.begin(), exact.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
            return a.at("location").value("uri", "") < b.at("location").value("uri", "");
        });
        location = exact.front()["location"];
    } else {
        const FilePosition& pos = std::get<FilePosition>(target);
        ensure_document_open(pos.file);
        nlohmann::json result =
            lsp_request("textDocument/definition", lsp().wire_location(pos));
        if (result.is_array() && !result.empty()) {
            location = result.front();
        } else if (result.is_object() && result.contains("uri")) {
            location = result;
        } else {
            throw ToolError(ToolError::Kind::NotFound, "no definition found at " + pos.file + ":" +
                                                           std::to_string(pos.line) + ":" +
                                                           std::to_string(pos.column));
        }
    }

    // LocationLink uses targetUri/targetRange; plain Location uses uri/range.
    std::string uri = location.value("uri", location.value("targetUri", ""));
    nlohmann::json range = location.contains("range") ? location["range"]
                                                      : location.value("targetRange", nlohmann::json());
    if (uri.empty() || range.is_null()) {
        throw ToolError(ToolError::Kind::Internal, "malformed definition response");
    }
    FilePosition decl = lsp().public_position(uri, range.at("start"));
    return fragment_at(decl, fallback_name);
}

std::vector<Diagnostic> ToolserverCore::diagnostics(const std::string& rel_file) {
    std::string norm = util::normalize_rel(rel_file);
    read_workspace_file(norm); // existence check

    const long settle_ms = static_cast<long>(settle_seconds_ * 1000);
    const long cap_ms = static_cast<long>(cap_seconds_ * 1000);
    const long start = now_ms();

    for (;;) {
        try {
            ensure_document_open(norm);
            LspClient& client = lsp();
            long last_count = client.publish_count(norm);
            long last_activity = now_ms();
            for (;;) {
                long elapsed = now_ms() - start;
                if (elapsed >= cap_ms) break;
                if (now_ms() - last_activity >= settle_ms) break;
                client.pump(std::min(50L, settle_ms > 0 ? settle_ms : 50L));
                if (client.publish_count(norm) != last_count) {
                    last_count = client.publish_count(norm);
                    last_activity = now_ms();
                }
            }
            return client.published_diagnostics(norm);
        } catch (const LspTransportError&) {
            manager_->handle_transport_failure(); // throws when budget is spent
        }
    }
}

size_t ToolserverCore::edit_file(const std::string& rel_file, const std::vector<TextEdit>& edits) {
    std::string norm = util::normalize_rel(rel_file);
    read_workspace_file(norm); // existence + containment check
    EditResult res = apply_edits(fs::path(root_) / norm, edits);
    // Keep an already-running language server in sync with the change;
    // never spawn one just for this, and never fail the edit over it.
    if (res.applied > 0 && manager_) {
        if (LspClient* client = manager_->client_if_running()) {
            if (client->open_documents().count(norm)) {
                try {
                    client->change_document(norm, util::read_file(fs::path(root_) / norm));
                } catch (const LspTransportError&) {
                }
            }
        }
    }
    return res.applied;
}

HoverResult ToolserverCore::hover(const FilePosition& pos) {
    ensure_document_open(pos.file);
    nlohmann::json result = lsp_request("textDocument/hover", lsp().wire_location(pos));
    if (result.is_null() || !result.contains("contents") || result["contents"].is_null()) {
        return {false, ""};
    }
    std::string text = render_hover_text(result["contents"]);
    if (text.empty()) return {false, ""};
    return {true, text};
}

std::vector<FilePosition> ToolserverCore::references(const FilePosition& pos,
                                                     bool include_declaration) {
    ensure_document_open(pos.file);
    nlohmann::json params = lsp().wire_location(pos);
    params["context"] = {{"includeDeclaration", include_declaration}};
    nlohmann::json result = lsp_request("textDocument/references", params);
    if (result.is_null()) {
        throw ToolError(ToolError::Kind::NotFound, "unresolved symbol at " + pos.file + ":" +
                                                       std::to_string(pos.line));
    }
    std::vector<FilePosition> out;
    for (const auto& loc : result) {
        out.push_back(lsp().public_position(loc.value("uri", ""), loc.at("range").at("start")));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RenameResult ToolserverCore::rename_symbol(const FilePosition& pos, const std::string& new_name) {
    if (!valid_identifier(profile_.language, new_name)) {
        throw ToolError(ToolError::Kind::InvalidEdit,
                        "'" + new_name + "' is not a valid " + profile_.language + " identifier");
    }
    ensure_document_open(pos.file);
    nlohmann::json params = lsp().wire_location(pos);
    params["newName"] = new_name;
    nlohmann::json edit;
    try {
        edit = lsp_request("textDocument/rename", params);
    } catch (const LspResponseError& e) {
        // e.g. a name collision the server refuses to create
        throw ToolError(ToolError::Kind::InvalidEdit, e.what());
    }
    if (edit.is_null()) return {0, 0};

    // Normalize both WorkspaceEdit shapes into uri -> wire edit list.
    std::map<std::string, nlohmann::json> by_uri;
    if (edit.contains("changes")) {
        for (const auto& [uri, edits] : edit["changes"].items()) by_uri[uri] = edits;
    } else if (edit.contains("documentChanges")) {
        for (const auto& dc : edit["documentChanges"]) {
            by_uri[dc.at("textDocument").at("uri").get<std::string>()] = dc.at("edits");
        }
    }

    // Phase 1: compute every file's new content in memory (validation may
    // throw; nothing has been written yet, keeping the rename atomic).
    struct PendingWrite {
        std::string rel;
        std::string content;
        size_t edit_count;
    };
    std::vector<PendingWrite> writes;
    int edits_total = 0;
    for (const auto& [uri, wire_edits] : by_uri) {
        std::string rel = lsp().rel_of_uri(uri);
        std::string original = read_workspace_file(rel);
        std::vector<TextEdit> batch;
        for (const auto& we : wire_edits) {
            TextEdit te;
            const auto& range = we.at("range");
            te.start = {rel, range.at("start").at("line").get<int>() + 1,
                        range.at("start").at("character").get<int>() + 1};
            te.end = {rel, range.at("end").at("line").get<int>() + 1,
                      range.at("end").at("character").get<int>() + 1};
            te.replacement = we.at("newText").get<std::string>();
            batch.push_back(std::move(te));
        }
        std::string next = splice_edits(original, batch);
        if (next != original) {
            writes.push_back({rel, std::move(next), batch.size()});
            edits_total += static_cast<int>(batch.size());
        }
    }

    // Phase 2: all validations passed; replace files and sync the server.
    for (const auto& w : writes) {
        util::write_file_atomic(fs::path(root_) / w.rel, w.content);
        if (lsp().open_documents().count(w.rel)) lsp().change_document(w.rel, w.content);
    }
    return {static_cast<int>(writes.size()), edits_total};
}

DirectoryTreeResult ToolserverCore::get_directory_tree(const std::vector<std::string>& exclude) {
    DirTreeNode node = build_directory_tree(root_, exclude);
    return {dirtree_to_json(node), render_directory_tree(node)};
}

SkeletonRecord ToolserverCore::file_structure(const std::string& rel_file) {
    std::string norm = util::normalize_rel(rel_file);
    std::string text = read_workspace_file(norm);
    return get_file_structure(norm, profile_.language, text);
}

const std::vector<std::string>& ToolserverCore::method_names() {
    static const std::vector<std::string> names = {
        "definition",    "diagnostics",        "edit_file",          "hover",
        "references",    "rename_symbol",      "get_directory_tree", "get_file_structure"};
    return names;
}

nlohmann::json ToolserverCore::dispatch(const std::string& method, const nlohmann::json& params) {
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!params.is_object() || !params.contains(key)) {
            throw std::invalid_argument(std::string("missing required param '") + key + "'");
        }
        return params[key];
    };
    auto position_params = [&]() -> FilePosition {
        FilePosition p;
        p.file = require("file").get<std::string>();
        p.line = require("line").get<int>();
        p.column = require("column").get<int>();
        if (p.line < 1 || p.column < 1) throw std::invalid_argument("line/column are 1-based");
        return p;
    };

    if (method == "definition") {
        DefinitionResult res;
        if (params.contains("symbol")) {
            res = definition(require("symbol").get<std::string>());
        } else {
            res = definition(position_params());
        }
        return {{"body", res.body},
                {"fragment",
                 {{"file", res.fragment.file},
                  {"kind", core::fragment_kind_name(res.fragment.kind)},
                  {"qualified_name", res.fragment.qualified_name},
                  {"start_line", res.fragment.start_line},
                  {"end_line", res.fragment.end_line},
                  {"identity", core::fragment_identity(res.fragment)}}}};
    }
    if (method == "diagnostics") {
        auto items = diagnostics(require("file").get<std::string>());
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& d : items) arr.push_back(diagnostic_to_json(d));
        return {{"diagnostics", arr}};
    }
    if (method == "edit_file") {
        std::string file = require("file").get<std::string>();
        std::vector<TextEdit> edits;
        for (const auto& e : require("edits")) {
            TextEdit te;
            te.start = {file, e.at("start_line").get<int>(), e.at("start_column").get<int>()};
            te.end = {file, e.at("end_line").get<int>(), e.at("end_column").get<int>()};
            te.replacement = e.at("replacement").get<std::string>();
            edits.push_back(std::move(te));
        }
        return {{"applied", edit_file(file, edits)}};
    }
    if (method == "hover") {
        HoverResult res = hover(position_params());
        return {{"found", res.found}, {"text", res.text}};
    }
    if (method == "references") {
        bool include_decl = params.value("include_declaration", true);
        auto locs = references(position_params(), include_decl);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& l : locs) arr.push_back(position_to_json(l));
        return {{"locations", arr}};
    }
    if (method == "rename_symbol") {
        RenameResult res = rename_symbol(position_params(), require("new_name").get<std::string>());
        return {{"files_changed", res.files_changed}, {"edits_applied", res.edits_applied}};
    }
    if (method == "get_directory_tree") {
        std::vector<std::string> exclude;
        if (params.is_object() && params.contains("exclude")) {
            for (const auto& g : params["exclude"]) exclude.push_back(g.get<std::string>());
        }
        DirectoryTreeResult res = get_directory_tree(exclude);
        return {{"tree", res.tree}, {"rendered", res.rendered}};
    }
    if (method == "get_file_structure") {
        return skeleton_to_json(file_structure(require("file").get<std::string>()));
    }
    throw std::out_of_range("unknown method: " + method);
}

} // namespace xlate::toolserver
