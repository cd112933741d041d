#include "xlate/toolserver/lsp_client.hpp"

#include "xlate/util/fs.hpp"

#include <chrono>
#include <thread>

namespace xlate::toolserver {

namespace {

long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Severity severity_from_wire(int code) {
    switch (code) {
    case 1: return Severity::Error;
    case 2: return Severity::Warning;
    case 3: return Severity::Info;
    case 4: return Severity::Hint;
    }
    return Severity::Error;
}

} // namespace

std::string lsp_frame(const std::string& payload) {
    return "Content-Length: " + std::to_string(payload.size()) + "\r\n\r\n" + payload;
}

void FrameParser::feed(const char* data, size_t len) { buffer_.append(data, len); }

std::optional<std::string> FrameParser::next() {
    auto header_end = buffer_.find("\r\n\r\n");
    if (header_end == std::string::npos) return std::nullopt;
    size_t content_length = 0;
    size_t pos = 0;
    bool found = false;
    while (pos < header_end) {
        auto line_end = buffer_.find("\r\n", pos);
        std::string line = buffer_.substr(pos, line_end - pos);
        const std::string key = "Content-Length:";
        if (line.rfind(key, 0) == 0) {
            content_length = std::stoul(line.substr(key.size()));
            found = true;
        }
        pos = line_end + 2;
    }
    if (!found) {
        // Malformed header block; drop it to resynchronize.
        buffer_.erase(0, header_end + 4);
        return std::nullopt;
    }
    size_t body_start = header_end + 4;
    if (buffer_.size() < body_start + content_length) return std::nullopt;
    std::string payload = buffer_.substr(body_start, content_length);
    buffer_.erase(0, body_start + content_length);
    return payload;
}

std::string path_to_uri(const std::string& abs_path) { return "file://" + abs_path; }

std::string uri_to_path(const std::string& uri) {
    const std::string scheme = "file://";
    if (uri.rfind(scheme, 0) == 0) return uri.substr(scheme.size());
    return uri;
}

LspClient::~LspClient() { shutdown(); }

void LspClient::start() {
    if (launch_.argv.empty()) throw LspTransportError("no language server command configured");
    if (!proc_.start(launch_.argv, launch_.root)) {
        throw LspTransportError("failed to spawn language server: " + proc_.error());
    }
    started_ = true;
    nlohmann::json params = {
        {"processId", nullptr},
        {"rootUri", path_to_uri(launch_.root)},
        {"capabilities", nlohmann::json::object()},
    };
    request("initialize", params);
    notify("initialized", nlohmann::json::object());
}

void LspClient::shutdown() {
    if (!started_) return;
    started_ = false;
    try {
        // Best-effort polite shutdown; a dead process just gets killed.
        nlohmann::json msg = {{"jsonrpc", "2.0"}, {"id", next_id_++}, {"method", "shutdown"}};
        send(msg);
        notify("exit", nlohmann::json::object());
    } catch (...) {
    }
    proc_.kill();
}

void LspClient::send(const nlohmann::json& message) {
    if (!proc_.write_all(lsp_frame(message.dump()))) {
        throw LspTransportError("language server pipe closed");
    }
}

nlohmann::json LspClient::request(const std::string& method, nlohmann::json params) {
    long long id = next_id_++;
    nlohmann::json msg = {
        {"jsonrpc", "2.0"}, {"id", id}, {"method", method}, {"params", std::move(params)}};
    send(msg);
    return await_response(id);
}

void LspClient::notify(const std::string& method, nlohmann::json params) {
    nlohmann::json msg = {{"jsonrpc", "2.0"}, {"method", method}, {"params", std::move(params)}};
    send(msg);
}

nlohmann::json LspClient::await_response(long long id) {
    const long deadline = now_ms() + launch_.request_timeout_ms;
    for (;;) {
        if (auto it = pending_responses_.find(id); it != pending_responses_.end()) {
            nlohmann::json resp = std::move(it->second);
            pending_responses_.erase(it);
            if (resp.contains("error") && !resp["error"].is_null()) {
                const auto& err = resp["error"];
                throw LspResponseError(err.value("code", 0),
                                       err.value("message", std::string("language server error")));
            }
            return resp.value("result", nlohmann::json());
        }
        long remaining = deadline - now_ms();
        if (remaining <= 0) {
            throw ToolError(ToolError::Kind::Timeout, "language server request timed out");
        }
        char buf[8192];
        bool timed_out = false;
        size_t n = proc_.read_some(buf, sizeof buf, std::min(remaining, 200L), &timed_out);
        if (n == 0) {
            if (timed_out) continue;
            throw LspTransportError("language server closed its stdout");
        }
        parser_.feed(buf, n);
        while (auto payload = parser_.next()) {
            nlohmann::json msg = nlohmann::json::parse(*payload, nullptr, false);
            if (msg.is_discarded()) continue;
            handle_incoming(msg);
        }
    }
}

void LspClient::handle_incoming(const nlohmann::json& msg) {
    if (msg.contains("id") && !msg.contains("method")) {
        // Response to one of our requests.
        if (msg["id"].is_number_integer()) {
            pending_responses_[msg["id"].get<long long>()] = msg;
        }
        return;
    }
    if (msg.contains("id") && msg.contains("method")) {
        // Server-to-client request (registerCapability, configuration, ...):
        // acknowledge with an empty result so the server keeps going.
        nlohmann::json reply = {{"jsonrpc", "2.0"}, {"id", msg["id"]}, {"result", nullptr}};
        send(reply);
        return;
    }
    // Notification.
    std::string method = msg.value("method", "");
    if (method == "textDocument/publishDiagnostics") {
        const auto& params = msg["params"];
        std::string rel = rel_of_uri(params.value("uri", ""));
        std::vector<Diagnostic> items;
        for (const auto& d : params.value("diagnostics", nlohmann::json::array())) {
            Diagnostic diag;
            diag.file = rel;
            const auto& range = d.at("range");
            diag.start_line = range.at("start").at("line").get<int>() + 1;
            diag.start_column = range.at("start").at("character").get<int>() + 1;
            diag.end_line = range.at("end").at("line").get<int>() + 1;
            diag.end_column = range.at("end").at("character").get<int>() + 1;
            diag.severity = severity_from_wire(d.value("severity", 1));
            diag.message = d.value("message", "");
            diag.source = d.value("source", "");
            items.push_back(std::move(diag));
        }
        diagnostics_[rel] = std::move(items);
        publish_counts_[rel]++;
    }
}

void LspClient::pump(long slice_ms) {
    const long deadline = now_ms() + slice_ms;
    for (;;) {
        long remaining = deadline - now_ms();
        if (remaining <= 0) return;
        char buf[8192];
        bool timed_out = false;
        size_t n = proc_.read_some(buf, sizeof buf, remaining, &timed_out);
        if (n == 0) {
            if (timed_out) return;
            throw LspTransportError("language server closed its stdout");
        }
        parser_.feed(buf, n);
        while (auto payload = parser_.next()) {
            nlohmann::json msg = nlohmann::json::parse(*payload, nullptr, false);
            if (msg.is_discarded()) continue;
            handle_incoming(msg);
        }
    }
}

void LspClient::open_document(const std::string& rel, const std::string& text) {
    if (doc_versions_.count(rel)) return;
    doc_versions_[rel] = 1;
    notify("textDocument/didOpen",
           {{"textDocument",
             {{"uri", uri_of_rel(rel)},
              {"languageId", launch_.language_id},
              {"version", 1},
              {"text", text}}}});
}

void LspClient::change_document(const std::string& rel, const std::string& text) {
    int version = ++doc_versions_[rel];
    notify("textDocument/didChange",
           {{"textDocument", {{"uri", uri_of_rel(rel)}, {"version", version}}},
            {"contentChanges", nlohmann::json::array({{{"text", text}}})}});
}

std::vector<Diagnostic> LspClient::published_diagnostics(const std::string& rel) const {
    auto it = diagnostics_.find(rel);
    return it == diagnostics_.end() ? std::vector<Diagnostic>{} : it->second;
}

long LspClient::publish_count(const std::string& rel) const {
    auto it = publish_counts_.find(rel);
    return it == publish_counts_.end() ? 0 : it->second;
}

nlohmann::json LspClient::wire_position(int line, int column) {
    return {{"line", line - 1}, {"character", column - 1}};
}

nlohmann::json LspClient::wire_location(const FilePosition& pos) const {
    return {{"textDocument", {{"uri", uri_of_rel(pos.file)}}},
            {"position", wire_position(pos.line, pos.column)}};
}

FilePosition LspClient::public_position(const std::string& uri,
                                        const nlohmann::json& wire_pos) const {
    FilePosition p;
    p.file = rel_of_uri(uri);
    p.line = wire_pos.at("line").get<int>() + 1;
    p.column = wire_pos.at("character").get<int>() + 1;
    return p;
}

std::string LspClient::rel_of_uri(const std::string& uri) const {
    std::string path = uri_to_path(uri);
    if (path.rfind(launch_.root, 0) == 0) {
        std::string rel = path.substr(launch_.root.size());
        if (!rel.empty() && rel.front() == '/') rel.erase(rel.begin());
        return rel;
    }
    return path;
}

std::string LspClient::uri_of_rel(const std::string& rel) const {
    return path_to_uri(launch_.root + "/" + rel);
}

nlohmann::json LspManager::request(const std::string& method, nlohmann::json params) {
    for (;;) {
        LspClient& client = ensure();
        try {
            return client.request(method, params);
        } catch (const LspTransportError&) {
            restart_or_degrade();
        }
    }
}

LspClient& LspManager::ensure() {
    if (degraded_) {
        throw ToolError(ToolError::Kind::CapabilityUnavailable,
                        "language server unavailable after " +
                            std::to_string(opts_.max_restarts) + " restarts");
    }
    if (client_ && client_->started()) return *client_;
    client_ = std::make_unique<LspClient>(opts_.launch);
    try {
        client_->start();
    } catch (const LspTransportError& e) {
        client_.reset();
        degraded_ = true;
        throw ToolError(ToolError::Kind::CapabilityUnavailable,
                        std::string("language server failed to start: ") + e.what());
    }
    // Restore the documents the previous incarnation had open.
    for (const auto& [rel, text] : reopen_texts_) client_->open_document(rel, text);
    return *client_;
}

void LspManager::restart_or_degrade() {
    if (client_) {
        // Remember open documents so the replacement server sees them.
        for (const auto& [rel, _] : client_->open_documents()) {
            if (!reopen_texts_.count(rel)) {
                try {
                    reopen_texts_[rel] = util::read_file(opts_.launch.root + "/" + rel);
                } catch (...) {
                }
            }
        }
        client_.reset();
    }
    if (restarts_used_ >= opts_.max_restarts) {
        degraded_ = true;
        throw ToolError(ToolError::Kind::CapabilityUnavailable,
                        "language server crashed; restart budget (" +
                            std::to_string(opts_.max_restarts) + ") exhausted");
    }
    long delay = opts_.backoff_base_ms << restarts_used_; // exponential backoff
    ++restarts_used_;
    std::this_thread::sleep_for(std::chrono::milliseconds(delay));
}

LspClient* LspManager::client_if_running() {
    return (client_ && client_->started()) ? client_.get() : nullptr;
}

void LspManager::shutdown() {
    if (client_) client_->shutdown();
    client_.reset();
}

} // namespace xlate::toolserver
