#include "xlate/llm/types.hpp"

#include "xlate/util/hash.hpp"

#include <algorithm>

namespace xlate::llm {

nlohmann::json tool_call_to_json(const ToolCall& c) {
    return {{"id", c.id}, {"name", c.name}, {"arguments", c.arguments}};
}

ToolCall tool_call_from_json(const nlohmann::json& j) {
    ToolCall c;
    c.id = j.value("id", "");
    c.name = j.at("name").get<std::string>();
    c.arguments = j.value("arguments", nlohmann::json::object());
    return c;
}

nlohmann::json message_to_json(const Message& m) {
    nlohmann::json j = {{"role", m.role}, {"content", m.content}};
    if (!m.tool_calls.empty()) {
        nlohmann::json calls = nlohmann::json::array();
        for (const auto& c : m.tool_calls) calls.push_back(tool_call_to_json(c));
        j["tool_calls"] = calls;
    }
    if (!m.tool_call_id.empty()) j["tool_call_id"] = m.tool_call_id;
    return j;
}

Message message_from_json(const nlohmann::json& j) {
    Message m;
    m.role = j.at("role").get<std::string>();
    m.content = j.value("content", "");
    if (j.contains("tool_calls")) {
        for (const auto& c : j["tool_calls"]) m.tool_calls.push_back(tool_call_from_json(c));
    }
    m.tool_call_id = j.value("tool_call_id", "");
    return m;
}

nlohmann::json tool_spec_to_json(const ToolSpec& t) {
    return {{"name", t.name}, {"description", t.description}, {"parameters", t.parameters}};
}

ToolSpec tool_spec_from_json(const nlohmann::json& j) {
    ToolSpec t;
    t.name = j.at("name").get<std::string>();
    t.description = j.value("description", "");
    t.parameters = j.value("parameters", nlohmann::json::object());
    return t;
}

nlohmann::json request_to_json(const CompletionRequest& r) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : r.messages) messages.push_back(message_to_json(m));
    nlohmann::json tools = nlohmann::json::array();
    for (const auto& t : r.tools) tools.push_back(tool_spec_to_json(t));
    return {{"model", r.model},       {"agent", r.agent},
            {"messages", messages},   {"tools", tools},
            {"temperature", r.temperature}, {"max_tokens", r.max_tokens}};
}

CompletionRequest request_from_json(const nlohmann::json& j) {
    CompletionRequest r;
    r.model = j.value("model", "");
    r.agent = j.value("agent", "");
    for (const auto& m : j.value("messages", nlohmann::json::array())) {
        r.messages.push_back(message_from_json(m));
    }
    for (const auto& t : j.value("tools", nlohmann::json::array())) {
        r.tools.push_back(tool_spec_from_json(t));
    }
    r.temperature = j.value("temperature", 0.0);
    r.max_tokens = j.value("max_tokens", 0);
    return r;
}

nlohmann::json response_to_json(const CompletionResponse& r) {
    nlohmann::json calls = nlohmann::json::array();
    for (const auto& c : r.tool_calls) calls.push_back(tool_call_to_json(c));
    return {{"content", r.content},
            {"tool_calls", calls},
            {"stop_reason", r.stop_reason},
            {"usage",
             {{"input_tokens", r.usage.input_tokens}, {"output_tokens", r.usage.output_tokens}}}};
}

CompletionResponse response_from_json(const nlohmann::json& j) {
    CompletionResponse r;
    r.content = j.value("content", "");
    for (const auto& c : j.value("tool_calls", nlohmann::json::array())) {
        r.tool_calls.push_back(tool_call_from_json(c));
    }
    r.stop_reason = j.value("stop_reason", "");
    if (j.contains("usage")) {
        r.usage.input_tokens = j["usage"].value("input_tokens", 0L);
        r.usage.output_tokens = j["usage"].value("output_tokens", 0L);
    }
    return r;
}

nlohmann::json canonical_request_json(const CompletionRequest& r) {
    nlohmann::json j = request_to_json(r);
    // Tool order must not affect identity.
    std::vector<nlohmann::json> tools(j["tools"].begin(), j["tools"].end());
    std::sort(tools.begin(), tools.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
        return a.at("name").get<std::string>() < b.at("name").get<std::string>();
    });
    j["tools"] = tools;
    return j;
}

std::string request_fingerprint(const CompletionRequest& r) {
    // nlohmann::json objects iterate key-sorted, so dump() is canonical.
    return util::sha256_hex(canonical_request_json(r).dump());
}

} // namespace xlate::llm
