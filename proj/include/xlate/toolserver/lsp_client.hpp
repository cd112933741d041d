#pragma once

#include "xlate/toolserver/types.hpp"
#include "xlate/util/subprocess.hpp"

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xlate::toolserver {

// Content-Length framing used on the language-server wire.
std::string lsp_frame(const std::string& payload);

// Incremental decoder: feed bytes, take complete JSON payloads.
class FrameParser {
public:
    void feed(const char* data, size_t len);
    std::optional<std::string> next();

private:
    std::string buffer_;
};

// file:// URI helpers (plain paths, no percent-encoding — workspace paths
// here are ASCII).
std::string path_to_uri(const std::string& abs_path);
std::string uri_to_path(const std::string& uri);

// Transport-level failure (dead process, EOF, write error). The manager
// layer reacts by restarting the server.
struct LspTransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The server answered with a JSON-RPC error object.
struct LspResponseError : std::runtime_error {
    int code;
    LspResponseError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct LspLaunch {
    std::vector<std::string> argv;
    std::string root;           // absolute workspace root
    std::string language_id;    // sent in didOpen
    long request_timeout_ms = 15000;
};

// Synchronous client for one language-server subprocess. Single-threaded:
// requests pump the read loop until their response arrives; notifications
// received along the way (diagnostics) are stored for later retrieval.
// Public coordinates are 1-based; conversion to the protocol's 0-based
// coordinates happens here and only here.
class LspClient {
public:
    explicit LspClient(LspLaunch launch) : launch_(std::move(launch)) {}
    ~LspClient();

    // Spawn + initialize handshake. Throws LspTransportError on failure.
    void start();
    void shutdown(); // best-effort shutdown/exit, then reap
    bool started() const { return started_; }

    nlohmann::json request(const std::string& method, nlohmann::json params);
    void notify(const std::string& method, nlohmann::json params);

    void open_document(const std::string& rel, const std::string& text);
    void change_document(const std::string& rel, const std::string& text);
    const std::map<std::string, int>& open_documents() const { return doc_versions_; }

    // Reads incoming traffic for up to slice_ms, handling notifications.
    void pump(long slice_ms);

    // Diagnostics published so far for a file (empty when none arrived).
    std::vector<Diagnostic> published_diagnostics(const std::string& rel) const;
    // Monotone counter of publishDiagnostics notifications for the file.
    long publish_count(const std::string& rel) const;

    // 1-based public position -> wire position object.
    static nlohmann::json wire_position(int line, int column);
    nlohmann::json wire_location(const FilePosition& pos) const;
    FilePosition public_position(const std::string& uri, const nlohmann::json& wire_pos) const;
    std::string rel_of_uri(const std::string& uri) const;
    std::string uri_of_rel(const std::string& rel) const;

private:
    void send(const nlohmann::json& message);
    // Reads until the response for `id` arrives or the deadline passes.
    nlohmann::json await_response(long long id);
    void handle_incoming(const nlohmann::json& msg);

    LspLaunch launch_;
    util::Spawn proc_;
    FrameParser parser_;
    bool started_ = false;
    long long next_id_ = 1;
    std::map<std::string, std::vector<Diagnostic>> diagnostics_;
    std::map<std::string, long> publish_counts_;
    std::map<std::string, int> doc_versions_;
    std::map<long long, nlohmann::json> pending_responses_;
};

// Restart policy around LspClient: bounded restarts with exponential
// backoff, after which LSP-backed capabilities degrade to a structured
// "capability unavailable" error for the rest of the session.
class LspManager {
public:
    struct Options {
        LspLaunch launch;
        int max_restarts = 3;
        long backoff_base_ms = 200;
    };
    explicit LspManager(Options opts) : opts_(std::move(opts)) {}

    // Runs one request with crash-restart handling.
    nlohmann::json request(const std::string& method, nlohmann::json params);

    // Access to the live client for didOpen/diagnostics bookkeeping;
    // ensures the subprocess is up (may throw ToolError).
    LspClient& ensure();

    bool degraded() const { return degraded_; }
    void shutdown();

    // The live client, or nullptr when none is running. Never spawns.
    LspClient* client_if_running();

    // Reacts to a transport failure observed outside request(): restarts
    // the server (with backoff) or throws once the budget is spent.
    void handle_transport_failure() { restart_or_degrade(); }

private:
    void restart_or_degrade();

    Options opts_;
    std::unique_ptr<LspClient> client_;
    std::map<std::string, std::string> reopen_texts_; // rel -> last known text
    int restarts_used_ = 0;
    bool degraded_ = false;
};

} // namespace xlate::toolserver
