// Scenario-driven language server for tests. Speaks Content-Length framed
// JSON-RPC on stdio like a real server, but every answer comes from a
// scenario file given as argv[1]:
//
//   {
//     "diagnostics":        { "<rel>": [ {start_line,start_column,end_line,
//                                          end_column,severity,message,source} ] },
//     "diagnostic_waves":   { "<rel>": [ {"delay_ms": N, "items": [ ... ]} ] },
//     "hover":              [ {file,line,column,markdown} ],
//     "definitions":        [ {file,line,column,
//                              target:{file,line,column,end_line,end_column}} ],
//     "references":         [ {file,line,column,
//                              locations:[{file,line,column,end_column,declaration?}]} ],
//     "renames":            [ {file,line,column, error?:"msg",
//                              changes?:{ "<rel>": [{start_line,start_column,
//                                         end_line,end_column,new_text}] }} ],
//     "symbols":            [ {name,file,line,column,end_line,end_column} ],
//     "crash_on_request_number": N,   // exit(1) instead of answering request #N
//     "crash_flag_file": "<path>"     // if set: crash only once, flag the crash here
//   }
//
// All scenario positions are 1-based (human coordinates); this program does
// the same 0-based wire conversion a real server performs, so both sides of
// the client's coordinate translation get exercised.

#include "xlate/toolserver/lsp_client.hpp"
#include "xlate/util/fs.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>
#include <unistd.h>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

json g_scenario;
std::string g_root; // absolute root from the initialize request
long g_requests_seen = 0;

void reply(const json& id, const json& result) {
    json msg = {{"jsonrpc", "2.0"}, {"id", id}, {"result", result}};
    std::string framed = xlate::toolserver::lsp_frame(msg.dump());
    fwrite(framed.data(), 1, framed.size(), stdout);
    fflush(stdout);
}

void reply_error(const json& id, int code, const std::string& message) {
    json msg = {{"jsonrpc", "2.0"},
                {"id", id},
                {"error", {{"code", code}, {"message", message}}}};
    std::string framed = xlate::toolserver::lsp_frame(msg.dump());
    fwrite(framed.data(), 1, framed.size(), stdout);
    fflush(stdout);
}

void notify(const std::string& method, const json& params) {
    json msg = {{"jsonrpc", "2.0"}, {"method", method}, {"params", params}};
    std::string framed = xlate::toolserver::lsp_frame(msg.dump());
    fwrite(framed.data(), 1, framed.size(), stdout);
    fflush(stdout);
}

std::string rel_of_uri(const std::string& uri) {
    std::string path = xlate::toolserver::uri_to_path(uri);
    if (!g_root.empty() && path.rfind(g_root + "/", 0) == 0) {
        return path.substr(g_root.size() + 1);
    }
    return path;
}

std::string uri_of_rel(const std::string& rel) {
    return xlate::toolserver::path_to_uri(g_root + "/" + rel);
}

// Scenario ranges are 1-based inclusive columns; the wire wants 0-based
// with an exclusive end character.
json wire_range(int line, int col, int end_line, int end_col_exclusive) {
    return {{"start", {{"line", line - 1}, {"character", col - 1}}},
            {"end", {{"line", end_line - 1}, {"character", end_col_exclusive - 1}}}};
}

json diag_to_wire(const json& d) {
    int severity = 1;
    std::string s = d.value("severity", "error");
    if (s == "warning") severity = 2;
    else if (s == "info") severity = 3;
    else if (s == "hint") severity = 4;
    return {{"range", wire_range(d.at("start_line"), d.at("start_column"),
                                 d.at("end_line"), d.at("end_column"))},
            {"severity", severity},
            {"message", d.at("message")},
            {"source", d.value("source", "fakelsp")}};
}

void publish(const std::string& rel, const json& items) {
    json diags = json::array();
    for (const auto& d : items) diags.push_back(diag_to_wire(d));
    notify("textDocument/publishDiagnostics",
           {{"uri", uri_of_rel(rel)}, {"diagnostics", diags}});
}

void publish_for(const std::string& rel) {
    if (g_scenario.contains("diagnostics") && g_scenario["diagnostics"].contains(rel)) {
        publish(rel, g_scenario["diagnostics"][rel]);
    }
    if (g_scenario.contains("diagnostic_waves") &&
        g_scenario["diagnostic_waves"].contains(rel)) {
        for (const auto& wave : g_scenario["diagnostic_waves"][rel]) {
            long delay = wave.value("delay_ms", 0L);
            if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            publish(rel, wave.at("items"));
        }
    }
}

// Finds the scenario entry for `key` whose file/line/column match the
// request position (converted back to 1-based).
const json* match_position(const char* key, const json& params) {
    if (!g_scenario.contains(key)) return nullptr;
    std::string rel = rel_of_uri(params.at("textDocument").at("uri"));
    int line = params.at("position").at("line").get<int>() + 1;
    int col = params.at("position").at("character").get<int>() + 1;
    for (const auto& entry : g_scenario[key]) {
        if (entry.value("file", "") == rel && entry.value("line", 0) == line &&
            entry.value("column", 0) == col) {
            return &entry;
        }
    }
    return nullptr;
}

void maybe_crash() {
    long crash_at = g_scenario.value("crash_on_request_number", 0L);
    if (crash_at <= 0 || g_requests_seen != crash_at) return;
    std::string flag = g_scenario.value("crash_flag_file", "");
    if (!flag.empty()) {
        std::ifstream probe(flag);
        if (probe.good()) return; // already crashed once
        std::ofstream mark(flag);
        mark << "crashed\n";
    }
    std::exit(1);
}

void handle(const json& msg) {
    std::string method = msg.value("method", "");
    json params = msg.value("params", json::object());
    bool has_id = msg.contains("id");
    json id = has_id ? msg["id"] : json();

    if (has_id) {
        ++g_requests_seen;
        maybe_crash();
    }

    if (method == "initialize") {
        if (params.contains("rootUri") && params["rootUri"].is_string()) {
            g_root = xlate::toolserver::uri_to_path(params["rootUri"]);
        }
        reply(id, {{"capabilities",
                    {{"hoverProvider", true},
                     {"definitionProvider", true},
                     {"referencesProvider", true},
                     {"renameProvider", true},
                     {"workspaceSymbolProvider", true},
                     {"textDocumentSync", 1}}}});
        return;
    }
    if (method == "initialized" || method == "$/cancelRequest") return;
    if (method == "shutdown") {
        reply(id, nullptr);
        return;
    }
    if (method == "exit") std::exit(0);

    if (method == "textDocument/didOpen") {
        publish_for(rel_of_uri(params.at("textDocument").at("uri")));
        return;
    }
    if (method == "textDocument/didChange") {
        std::string rel = rel_of_uri(params.at("textDocument").at("uri"));
        if (g_scenario.contains("diagnostics_on_change") &&
            g_scenario["diagnostics_on_change"].contains(rel)) {
            publish(rel, g_scenario["diagnostics_on_change"][rel]);
        } else {
            publish_for(rel);
        }
        return;
    }

    if (method == "textDocument/hover") {
        const json* entry = match_position("hover", params);
        if (!entry) {
            reply(id, nullptr);
        } else {
            reply(id, {{"contents",
                        {{"kind", "markdown"}, {"value", entry->at("markdown")}}}});
        }
        return;
    }
    if (method == "textDocument/definition") {
        const json* entry = match_position("definitions", params);
        if (!entry) {
            reply(id, json::array());
        } else {
            const json& t = entry->at("target");
            reply(id, json::array({{{"uri", uri_of_rel(t.at("file"))},
                                    {"range", wire_range(t.at("line"), t.at("column"),
                                                         t.value("end_line", t.at("line").get<int>()),
                                                         t.value("end_column", t.at("column").get<int>()))}}}));
        }
        return;
    }
    if (method == "textDocument/references") {
        const json* entry = match_position("references", params);
        bool include_decl =
            params.value("context", json::object()).value("includeDeclaration", true);
        json out = json::array();
        if (entry) {
            for (const auto& loc : entry->at("locations")) {
                if (!include_decl && loc.value("declaration", false)) continue;
                out.push_back({{"uri", uri_of_rel(loc.at("file"))},
                               {"range", wire_range(loc.at("line"), loc.at("column"),
                                                    loc.value("end_line", loc.at("line").get<int>()),
                                                    loc.value("end_column", loc.at("column").get<int>()))}});
            }
        }
        reply(id, out);
        return;
    }
    if (method == "textDocument/rename") {
        const json* entry = match_position("renames", params);
        if (!entry) {
            reply_error(id, -32803, "nothing renamable at this position");
            return;
        }
        if (entry->contains("error")) {
            reply_error(id, -32803, entry->at("error"));
            return;
        }
        std::string new_name = params.value("newName", "");
        json changes = json::object();
        for (const auto& [rel, edits] : entry->at("changes").items()) {
            json arr = json::array();
            for (const auto& e : edits) {
                std::string text = e.value("new_text", "{new_name}");
                if (text == "{new_name}") text = new_name;
                arr.push_back({{"range", wire_range(e.at("start_line"), e.at("start_column"),
                                                    e.at("end_line"), e.at("end_column"))},
                               {"newText", text}});
            }
            changes[uri_of_rel(rel)] = arr;
        }
        reply(id, {{"changes", changes}});
        return;
    }
    if (method == "workspace/symbol") {
        std::string query = params.value("query", "");
        json out = json::array();
        if (g_scenario.contains("symbols")) {
            for (const auto& s : g_scenario["symbols"]) {
                std::string name = s.value("name", "");
                if (!query.empty() && name.find(query) == std::string::npos) continue;
                out.push_back(
                    {{"name", name},
                     {"kind", 12},
                     {"location",
                      {{"uri", uri_of_rel(s.at("file"))},
                       {"range", wire_range(s.at("line"), s.at("column"),
                                            s.value("end_line", s.at("line").get<int>()),
                                            s.value("end_column", s.at("column").get<int>()))}}}});
            }
        }
        reply(id, out);
        return;
    }

    if (has_id) reply_error(id, -32601, "unhandled method: " + method);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        fprintf(stderr, "usage: fakelsp <scenario.json>\n");
        return 2;
    }
    try {
        g_scenario = json::parse(xlate::util::read_file(argv[1]));
    } catch (const std::exception& e) {
        fprintf(stderr, "fakelsp: cannot load scenario: %s\n", e.what());
        return 2;
    }

    xlate::toolserver::FrameParser parser;
    char buf[4096];
    for (;;) {
        ssize_t n = read(STDIN_FILENO, buf, sizeof(buf));
        if (n <= 0) break;
        parser.feed(buf, static_cast<size_t>(n));
        while (auto payload = parser.next()) {
            json msg = json::parse(*payload, nullptr, /*allow_exceptions=*/false);
            if (msg.is_discarded()) continue;
            handle(msg);
        }
    }
    return 0;
}
