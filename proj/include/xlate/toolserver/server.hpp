#pragma once

#include "xlate/toolserver/core.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace xlate::toolserver {

// JSON-RPC 2.0 front end over a ToolserverCore. Messages are line-delimited
// JSON objects: one request per line in, one response per line out.
// Requests are served strictly in arrival order, so a mutating call
// (edit_file, rename_symbol) is always fully applied before the next
// request begins.
class RpcServer {
public:
    explicit RpcServer(ToolserverCore& core) : core_(core) {}

    // Handles one raw input line; returns the serialized response line, or
    // nullopt when no response is owed (notification, blank line).
    std::optional<std::string> handle_line(const std::string& line);

    // Builds the response object for one parsed request.
    nlohmann::json handle_request(const nlohmann::json& request);

    // Blocking loop: reads lines from `in`, writes response lines to `out`
    // until EOF. Returns the number of requests served.
    size_t serve_stream(std::istream& in, std::ostream& out);

    // Listens on 127.0.0.1:port (port 0 picks a free one), serving one
    // client connection at a time with the same line protocol. `on_ready`
    // receives the bound port before the first accept. Returns when
    // `stop()` is called from a handler or another thread.
    void serve_tcp(int port, const std::function<void(int)>& on_ready = {});
    void stop();

private:
    static nlohmann::json error_response(const nlohmann::json& id, int code,
                                         const std::string& message,
                                         const nlohmann::json& data = {});

    ToolserverCore& core_;
    bool stop_requested_ = false;
    int listen_fd_ = -1;
};

// JSON-RPC 2.0 error codes used by the server.
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kToolFailure = -32000; // data.kind carries the category

} // namespace xlate::toolserver
