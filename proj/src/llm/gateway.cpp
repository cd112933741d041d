#include "xlate/llm/gateway.hpp"

#include "xlate/util/fs.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

namespace xlate::llm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

std::string first_json_difference(const nlohmann::json& a, const nlohmann::json& b,
                                  const std::string& path) {
    if (a == b) return "";
    if (a.type() != b.type()) {
        return path + ": type " + std::string(a.type_name()) + " vs " +
               std::string(b.type_name());
    }
    if (a.is_object()) {
        for (const auto& [key, value] : a.items()) {
            if (!b.contains(key)) return path + "." + key + ": missing on one side";
            std::string d = first_json_difference(value, b[key], path + "." + key);
            if (!d.empty()) return d;
        }
        for (const auto& [key, value] : b.items()) {
            if (!a.contains(key)) return path + "." + key + ": missing on one side";
        }
        return path + ": objects differ";
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            return path + ": array length " + std::to_string(a.size()) + " vs " +
                   std::to_string(b.size());
        }
        for (size_t i = 0; i < a.size(); ++i) {
            std::string d =
                first_json_difference(a[i], b[i], path + "[" + std::to_string(i) + "]");
            if (!d.empty()) return d;
        }
        return path + ": arrays differ";
    }
    return path + ": " + a.dump() + " vs " + b.dump();
}

// --------------------------------- mock ------------------------------------

MockBackend MockBackend::from_json(const nlohmann::json& script) {
    if (script.value("version", 0) != 1) {
        throw GatewayError("mock script must declare version 1");
    }
    MockBackend backend;
    for (const auto& [agent, turns] : script.at("turns").items()) {
        for (const auto& t : turns) {
            Turn turn;
            turn.response = response_from_json(t);
            turn.sleep_ms = t.value("sleep_ms", 0L);
            turn.fail = t.value("fail", false);
            turn.fail_message = t.value("fail_message", "scripted failure");
            backend.turns_[agent].push_back(std::move(turn));
        }
    }
    return backend;
}

MockBackend MockBackend::from_file(const std::filesystem::path& path) {
    return from_json(nlohmann::json::parse(util::read_file(path)));
}

CompletionResponse MockBackend::complete(const CompletionRequest& req) {
    auto it = turns_.find(req.agent);
    if (it == turns_.end() || it->second.empty()) {
        throw GatewayError("mock script has no more turns for agent '" + req.agent + "'");
    }
    Turn turn = std::move(it->second.front());
    it->second.pop_front();
    if (turn.sleep_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(turn.sleep_ms));
    }
    if (turn.fail) throw GatewayError(turn.fail_message);
    return turn.response;
}

size_t MockBackend::remaining(const std::string& agent) const {
    auto it = turns_.find(agent);
    return it == turns_.end() ? 0 : it->second.size();
}

// -------------------------------- replay -----------------------------------

ReplayBackend::ReplayBackend(const Trajectory& recorded) {
    for (const auto* turn : recorded.turns()) turns_.push_back(turn->data);
}

CompletionResponse ReplayBackend::complete(const CompletionRequest& req) {
    if (cursor_ >= turns_.size()) {
        throw ReplayMismatch("replay log exhausted: request #" +
                             std::to_string(cursor_ + 1) + " (agent '" + req.agent +
                             "') has no recorded counterpart");
    }
    const nlohmann::json& recorded = turns_[cursor_];
    std::string want = recorded.value("fingerprint", "");
    std::string got = request_fingerprint(req);
    if (want != got) {
        std::string diff = "(recorded request body unavailable)";
        if (recorded.contains("request")) {
            diff = first_json_difference(
                canonical_request_json(request_from_json(recorded["request"])),
                canonical_request_json(req));
        }
        throw ReplayMismatch("replay divergence at turn #" + std::to_string(cursor_ + 1) +
                             " (agent '" + req.agent + "'): recorded fingerprint " + want +
                             ", new request " + got + "; first difference at " + diff);
    }
    ++cursor_;
    last_wall_ = recorded.value("wall_seconds", 0.0);
    return response_from_json(recorded.at("response"));
}

// --------------------------------- live ------------------------------------

nlohmann::json LiveBackend::to_wire(const CompletionRequest& req) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : req.messages) {
        nlohmann::json jm = {{"role", m.role}, {"content", m.content}};
        if (!m.tool_calls.empty()) {
            nlohmann::json calls = nlohmann::json::array();
            for (const auto& c : m.tool_calls) {
                calls.push_back({{"id", c.id},
                                 {"type", "function"},
                                 {"function",
                                  {{"name", c.name}, {"arguments", c.arguments.dump()}}}});
            }
            jm["tool_calls"] = calls;
        }
        if (!m.tool_call_id.empty()) jm["tool_call_id"] = m.tool_call_id;
        messages.push_back(std::move(jm));
    }
    nlohmann::json body = {{"model", req.model},
                           {"messages", messages},
                           {"temperature", req.temperature}};
    if (!req.tools.empty()) {
        nlohmann::json tools = nlohmann::json::array();
        for (const auto& t : req.tools) {
            tools.push_back({{"type", "function"},
                             {"function",
                              {{"name", t.name},
                               {"description", t.description},
                               {"parameters", t.parameters}}}});
        }
        body["tools"] = tools;
    }
    if (req.max_tokens > 0) body["max_tokens"] = req.max_tokens;
    return body;
}

CompletionResponse LiveBackend::from_wire(const nlohmann::json& body) {
    CompletionResponse res;
    const auto& choices = body.at("choices");
    if (choices.empty()) throw GatewayError("provider returned no choices");
    const auto& message = choices[0].at("message");
    if (message.contains("content") && message["content"].is_string()) {
        res.content = message["content"].get<std::string>();
    }
    if (message.contains("tool_calls")) {
        for (const auto& c : message["tool_calls"]) {
            ToolCall call;
            call.id = c.value("id", "");
            call.name = c.at("function").at("name").get<std::string>();
            std::string args = c.at("function").value("arguments", "{}");
            call.arguments = nlohmann::json::parse(args, nullptr, /*allow_exceptions=*/false);
            if (call.arguments.is_discarded()) {
                // Keep malformed tool arguments inspectable instead of dying.
                call.arguments = nlohmann::json{{"_raw", args}};
            }
            res.tool_calls.push_back(std::move(call));
        }
    }
    res.stop_reason = choices[0].value("finish_reason", "");
    if (body.contains("usage")) {
        res.usage.input_tokens = body["usage"].value("prompt_tokens", 0L);
        res.usage.output_tokens = body["usage"].value("completion_tokens", 0L);
    }
    return res;
}

CompletionResponse LiveBackend::complete(const CompletionRequest& req) {
    // Split base_url into host part and path prefix.
    std::string url = opts_.base_url;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw GatewayError("base_url needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    std::string host = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    std::string endpoint = prefix + "/chat/completions";

    std::string payload = to_wire(req).dump();
    httplib::Headers headers;
    if (!opts_.api_key.empty()) headers.emplace("Authorization", "Bearer " + opts_.api_key);

    std::string last_error;
    for (int attempt = 0; attempt < opts_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(opts_.backoff_base_ms << (attempt - 1)));
        }
        httplib::Client client(host);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(opts_.timeout_seconds, 0);
        auto res = client.Post(endpoint, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        if (res->status != 200) {
            throw GatewayError("provider rejected the request (HTTP " +
                               std::to_string(res->status) + "): " + res->body);
        }
        return from_wire(nlohmann::json::parse(res->body));
    }
    throw GatewayError("provider unreachable after " + std::to_string(opts_.max_attempts) +
                       " attempts; last error: " + last_error);
}

// -------------------------------- gateway ----------------------------------

CompletionResponse Gateway::complete(const std::string& agent, CompletionRequest req) {
    // Reject typo'd agent names before the backend spends tokens on them;
    // the ledger would refuse the entry afterwards anyway.
    if (!core::is_known_agent(agent)) {
        throw std::invalid_argument("gateway: unknown agent '" + agent + "'");
    }
    req.agent = agent;
    auto t0 = std::chrono::steady_clock::now();
    CompletionResponse response = backend_->complete(req);
    double wall = backend_->replayed_wall_seconds().value_or(seconds_since(t0));

    ledger_ = core::ledger_add(ledger_, agent, response.usage.input_tokens,
                               response.usage.output_tokens, wall);

    if (log_) {
        log_->append("turn", {{"agent", agent},
                              {"fingerprint", request_fingerprint(req)},
                              {"request", request_to_json(req)},
                              {"response", response_to_json(response)},
                              {"wall_seconds", wall}});
    }
    return response;
}

} // namespace xlate::llm
