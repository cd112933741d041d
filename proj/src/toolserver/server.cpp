#include "xlate/toolserver/server.hpp"

#include "xlate/util/strings.hpp"

#include <istream>
#include <ostream>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

namespace xlate::toolserver {

nlohmann::json RpcServer::error_response(const nlohmann::json& id, int code,
                                         const std::string& message,
                                         const nlohmann::json& data) {
    nlohmann::json err = {{"code", code}, {"message", message}};
    if (!data.is_null() && !(data.is_object() && data.empty())) err["data"] = data;
    return {{"jsonrpc", "2.0"}, {"id", id}, {"error", err}};
}

nlohmann::json RpcServer::handle_request(const nlohmann::json& request) {
    nlohmann::json id; // null until proven otherwise
    if (request.is_object() && request.contains("id")) id = request["id"];

    if (!request.is_object() || request.value("jsonrpc", "") != "2.0" ||
        !request.contains("method") || !request["method"].is_string()) {
        return error_response(id, kInvalidRequest, "not a JSON-RPC 2.0 request");
    }
    std::string method = request["method"].get<std::string>();
    nlohmann::json params = request.value("params", nlohmann::json::object());

    try {
        nlohmann::json result = core_.dispatch(method, params);
        return {{"jsonrpc", "2.0"}, {"id", id}, {"result", result}};
    } catch (const std::out_of_range&) {
        return error_response(id, kMethodNotFound, "unknown method: " + method);
    } catch (const std::invalid_argument& e) {
        return error_response(id, kInvalidParams, e.what());
    } catch (const ToolError& e) {
        return error_response(id, kToolFailure, e.what(),
                              {{"kind", tool_error_kind_name(e.kind)}});
    } catch (const nlohmann::json::exception& e) {
        return error_response(id, kInvalidParams, e.what());
    } catch (const std::exception& e) {
        return error_response(id, kToolFailure, e.what(), {{"kind", "internal"}});
    }
}

std::optional<std::string> RpcServer::handle_line(const std::string& line) {
    if (util::trim(line).empty()) return std::nullopt;

    nlohmann::json request = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (request.is_discarded()) {
        return error_response(nullptr, kParseError, "invalid JSON").dump();
    }
    // A request without an id is a notification: execute, answer nothing.
    bool is_notification = request.is_object() && !request.contains("id");
    nlohmann::json response = handle_request(request);
    if (is_notification) return std::nullopt;
    return response.dump();
}

size_t RpcServer::serve_stream(std::istream& in, std::ostream& out) {
    size_t served = 0;
    std::string line;
    while (!stop_requested_ && std::getline(in, line)) {
        auto response = handle_line(line);
        if (response) {
            out << *response << "\n";
            out.flush();
            ++served;
        }
    }
    return served;
}

void RpcServer::serve_tcp(int port, const std::function<void(int)>& on_ready) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw std::runtime_error("bind() failed on port " + std::to_string(port));
    }
    if (::listen(fd, 1) != 0) {
        ::close(fd);
        throw std::runtime_error("listen() failed");
    }
    socklen_t len = sizeof(addr);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    listen_fd_ = fd;
    if (on_ready) on_ready(ntohs(addr.sin_port));

    while (!stop_requested_) {
        int client = ::accept(fd, nullptr, nullptr);
        if (client < 0) break; // listener closed by stop()

        std::string carry;
        char buf[4096];
        for (;;) {
            ssize_t n = ::read(client, buf, sizeof(buf));
            if (n <= 0) break;
            carry.append(buf, static_cast<size_t>(n));
            size_t nl;
            while ((nl = carry.find('\n')) != std::string::npos) {
                std::string line = carry.substr(0, nl);
                carry.erase(0, nl + 1);
                auto response = handle_line(line);
                if (response) {
                    std::string payload = *response + "\n";
                    size_t off = 0;
                    while (off < payload.size()) {
                        ssize_t w = ::write(client, payload.data() + off, payload.size() - off);
                        if (w <= 0) break;
                        off += static_cast<size_t>(w);
                    }
                }
                if (stop_requested_) break;
            }
            if (stop_requested_) break;
        }
        ::close(client);
    }
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
}

void RpcServer::stop() {
    stop_requested_ = true;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
}

} // namespace xlate::toolserver
