#include "doctest.h"

#include "xlate/toolserver/server.hpp"
#include "xlate/util/fs.hpp"
#include "xlate/util/strings.hpp"

#include "testenv.hpp"

#include <sstream>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

using namespace xlate;
using namespace xlate::toolserver;
using nlohmann::json;

namespace {

ToolserverCore make_core(const std::filesystem::path& root, const std::string& language) {
    ToolserverCore::Options opts;
    opts.root = root.string();
    opts.profile.language = language;
    opts.profile.file_extensions = {language == "go" ? ".go" : ".py"};
    return ToolserverCore(opts);
}

json parse_response(const std::optional<std::string>& line) {
    REQUIRE(line.has_value());
    return json::parse(*line);
}

} // namespace

TEST_CASE("a request round-trips through the line protocol") {
    ToolserverCore core = make_core(testenv::fixture("py_figure_tree/python"), "python");
    RpcServer server(core);

    json req = {{"jsonrpc", "2.0"},
                {"id", 7},
                {"method", "get_directory_tree"},
                {"params", json::object()}};
    json res = parse_response(server.handle_line(req.dump()));
    CHECK(res["jsonrpc"] == "2.0");
    CHECK(res["id"] == 7);
    std::string golden = util::read_file(testenv::fixture("golden/py_figure_tree.txt"));
    CHECK(util::trim(res["result"]["rendered"].get<std::string>()) == util::trim(golden));
    CHECK(res["result"]["tree"]["name"] == "python");
}

TEST_CASE("get_file_structure serves records over RPC") {
    ToolserverCore core = make_core(testenv::fixture("py_figure_tree/python"), "python");
    RpcServer server(core);
    json req = {{"jsonrpc", "2.0"},
                {"id", "s1"},
                {"method", "get_file_structure"},
                {"params", {{"file", "src/main/BasicParser.py"}}}};
    json res = parse_response(server.handle_line(req.dump()));
    json golden = json::parse(util::read_file(testenv::fixture("golden/structure_BasicParser.json")));
    CHECK(res["result"] == golden);
}

TEST_CASE("edit_file mutates the workspace over RPC") {
    auto ws = testenv::scratch_dir("rpc-edit");
    util::write_file(ws / "note.txt", "draft\n");
    ToolserverCore core = make_core(ws, "python");
    RpcServer server(core);

    json req = {{"jsonrpc", "2.0"},
                {"id", 1},
                {"method", "edit_file"},
                {"params",
                 {{"file", "note.txt"},
                  {"edits", json::array({{{"start_line", 1},
                                          {"start_column", 1},
                                          {"end_line", 1},
                                          {"end_column", 6},
                                          {"replacement", "final"}}})}}}};
    json res = parse_response(server.handle_line(req.dump()));
    CHECK(res["result"]["applied"] == 1);
    CHECK(util::read_file(ws / "note.txt") == "final\n");
}

TEST_CASE("malformed JSON earns a parse error and the server keeps serving") {
    ToolserverCore core = make_core(testenv::fixture("py_figure_tree/python"), "python");
    RpcServer server(core);

    json res = parse_response(server.handle_line("{not json"));
    CHECK(res["error"]["code"] == kParseError);
    CHECK(res["id"].is_null());

    json req = {{"jsonrpc", "2.0"}, {"id", 2}, {"method", "get_directory_tree"}};
    CHECK(parse_response(server.handle_line(req.dump()))["result"].contains("rendered"));
}

TEST_CASE("protocol violations map to the right error codes") {
    ToolserverCore core = make_core(testenv::fixture("py_figure_tree/python"), "python");
    RpcServer server(core);

    // Not JSON-RPC 2.0.
    json res = parse_response(server.handle_line(R"({"id":1,"method":"hover"})"));
    CHECK(res["error"]["code"] == kInvalidRequest);

    // Unknown method.
    res = parse_response(
        server.handle_line(R"({"jsonrpc":"2.0","id":2,"method":"obliterate"})"));
    CHECK(res["error"]["code"] == kMethodNotFound);

    // Missing required parameter.
    res = parse_response(server.handle_line(
        R"({"jsonrpc":"2.0","id":3,"method":"get_file_structure","params":{}})"));
    CHECK(res["error"]["code"] == kInvalidParams);
}

TEST_CASE("tool failures carry a structured kind") {
    ToolserverCore core = make_core(testenv::fixture("py_figure_tree/python"), "python");
    RpcServer server(core);

    json res = parse_response(server.handle_line(
        R"({"jsonrpc":"2.0","id":4,"method":"get_file_structure","params":{"file":"ghost.py"}})"));
    CHECK(res["error"]["code"] == kToolFailure);
    CHECK(res["error"]["data"]["kind"] == "not_found");

    // No language server configured: hover degrades with its own kind.
    res = parse_response(server.handle_line(
        R"({"jsonrpc":"2.0","id":5,"method":"hover","params":{"file":"conftest.py","line":1,"column":1}})"));
    CHECK(res["error"]["code"] == kToolFailure);
    CHECK(res["error"]["data"]["kind"] == "capability_unavailable");
}

TEST_CASE("notifications are executed but never answered") {
    auto ws = testenv::scratch_dir("rpc-notify");
    util::write_file(ws / "note.txt", "draft\n");
    ToolserverCore core = make_core(ws, "python");
    RpcServer server(core);

    json notification = {{"jsonrpc", "2.0"},
                         {"method", "edit_file"},
                         {"params",
                          {{"file", "note.txt"},
                           {"edits", json::array({{{"start_line", 1},
                                                   {"start_column", 1},
                                                   {"end_line", 1},
                                                   {"end_column", 1},
                                                   {"replacement", "x"}}})}}}};
    CHECK_FALSE(server.handle_line(notification.dump()).has_value());
    CHECK(util::read_file(ws / "note.txt") == "xdraft\n");
    CHECK_FALSE(server.handle_line("").has_value());
}

TEST_CASE("serve_stream answers every request in arrival order") {
    ToolserverCore core = make_core(testenv::fixture("py_figure_tree/python"), "python");
    RpcServer server(core);

    std::ostringstream feed;
    for (int i = 1; i <= 3; ++i) {
        feed << json{{"jsonrpc", "2.0"}, {"id", i}, {"method", "get_directory_tree"}}.dump()
             << "\n";
    }
    std::istringstream in(feed.str());
    std::ostringstream out;
    CHECK(server.serve_stream(in, out) == 3);

    auto lines = util::split_lines(util::trim(out.str()));
    REQUIRE(lines.size() == 3);
    for (int i = 1; i <= 3; ++i) {
        CHECK(json::parse(lines[static_cast<size_t>(i) - 1])["id"] == i);
    }
}

TEST_CASE("mutations finish before the next request is processed") {
    auto ws = testenv::scratch_dir("rpc-order");
    util::write_file(ws / "doc.txt", "v1\n");
    ToolserverCore core = make_core(ws, "python");
    RpcServer server(core);

    // An edit followed immediately by a structure read of the same file:
    // the serial loop guarantees the read sees the edited bytes.
    json edit_req = {{"jsonrpc", "2.0"},
                     {"id", 1},
                     {"method", "edit_file"},
                     {"params",
                      {{"file", "doc.txt"},
                       {"edits", json::array({{{"start_line", 1},
                                               {"start_column", 1},
                                               {"end_line", 1},
                                               {"end_column", 3},
                                               {"replacement", "v2"}}})}}}};
    std::istringstream in(edit_req.dump() + "\n" +
                          json{{"jsonrpc", "2.0"},
                               {"id", 2},
                               {"method", "edit_file"},
                               {"params",
                                {{"file", "doc.txt"},
                                 {"edits", json::array({{{"start_line", 1},
                                                         {"start_column", 1},
                                                         {"end_line", 1},
                                                         {"end_column", 3},
                                                         {"replacement", "v3"}}})}}}}
                              .dump() +
                          "\n");
    std::ostringstream out;
    server.serve_stream(in, out);
    CHECK(util::read_file(ws / "doc.txt") == "v3\n");
}

TEST_CASE("the TCP listener speaks the same protocol") {
    ToolserverCore core = make_core(testenv::fixture("py_figure_tree/python"), "python");
    RpcServer server(core);

    int port = 0;
    std::thread accept_thread([&] { server.serve_tcp(0, [&](int p) { port = p; }); });
    for (int i = 0; i < 200 && port == 0; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    REQUIRE(port != 0);

    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<uint16_t>(port));
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);

    std::string req =
        json{{"jsonrpc", "2.0"}, {"id", 42}, {"method", "get_directory_tree"}}.dump() + "\n";
    REQUIRE(::write(fd, req.data(), req.size()) == static_cast<ssize_t>(req.size()));

    std::string response;
    char buf[4096];
    while (response.find('\n') == std::string::npos) {
        ssize_t n = ::read(fd, buf, sizeof(buf));
        REQUIRE(n > 0);
        response.append(buf, static_cast<size_t>(n));
    }
    json res = json::parse(response.substr(0, response.find('\n')));
    CHECK(res["id"] == 42);
    CHECK(res["result"]["tree"]["name"] == "python");

    ::close(fd);
    server.stop();
    accept_thread.join();
}
