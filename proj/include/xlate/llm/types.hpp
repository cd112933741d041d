#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xlate::llm {

// One entry in a chat transcript. `role` is system/user/assistant/tool.
// Assistant messages may carry tool calls; tool messages answer one call.
struct ToolCall {
    std::string id;
    std::string name;
    nlohmann::json arguments = nlohmann::json::object();

    bool operator==(const ToolCall&) const = default;
};

struct Message {
    std::string role;
    std::string content;
    std::vector<ToolCall> tool_calls; // assistant only
    std::string tool_call_id;         // tool role only

    bool operator==(const Message&) const = default;
};

// A callable tool advertised to the model.
struct ToolSpec {
    std::string name;
    std::string description;
    nlohmann::json parameters = nlohmann::json::object(); // JSON schema

    bool operator==(const ToolSpec&) const = default;
};

struct CompletionRequest {
    std::string model;
    std::string agent; // which pipeline role is asking (ledger attribution)
    std::vector<Message> messages;
    std::vector<ToolSpec> tools;
    double temperature = 0.0;
    int max_tokens = 0; // 0 = provider default
};

struct Usage {
    long input_tokens = 0;
    long output_tokens = 0;

    bool operator==(const Usage&) const = default;
};

struct CompletionResponse {
    std::string content;
    std::vector<ToolCall> tool_calls;
    std::string stop_reason; // "stop", "tool_calls", ...
    Usage usage;

    bool operator==(const CompletionResponse&) const = default;
};

nlohmann::json message_to_json(const Message& m);
Message message_from_json(const nlohmann::json& j);
nlohmann::json tool_call_to_json(const ToolCall& c);
ToolCall tool_call_from_json(const nlohmann::json& j);
nlohmann::json tool_spec_to_json(const ToolSpec& t);
ToolSpec tool_spec_from_json(const nlohmann::json& j);
nlohmann::json request_to_json(const CompletionRequest& r);
CompletionRequest request_from_json(const nlohmann::json& j);
nlohmann::json response_to_json(const CompletionResponse& r);
CompletionResponse response_from_json(const nlohmann::json& j);

// Canonical form used for fingerprinting: key-sorted JSON with tools
// ordered by name, so logically identical requests hash identically no
// matter how the caller assembled them.
nlohmann::json canonical_request_json(const CompletionRequest& r);

// SHA-256 hex digest of the canonical form.
std::string request_fingerprint(const CompletionRequest& r);

} // namespace xlate::llm
