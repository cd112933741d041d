#pragma once

#include "xlate/core/ledger.hpp"
#include "xlate/llm/trajectory.hpp"
#include "xlate/llm/types.hpp"

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace xlate::llm {

struct GatewayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a replayed request does not match what was recorded. The
// message pinpoints the first divergence between the two request bodies.
struct ReplayMismatch : GatewayError {
    using GatewayError::GatewayError;
};

// Human-readable path of the first difference between two JSON values
// (empty string when they are equal). Used for replay mismatch reports.
std::string first_json_difference(const nlohmann::json& a, const nlohmann::json& b,
                                  const std::string& path = "$");

class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResponse complete(const CompletionRequest& req) = 0;
    virtual std::string name() const = 0;
    // Replay reproduces the recorded wall time so downstream artifacts
    // (ledger) come out identical; live/mock backends measure real time.
    virtual std::optional<double> replayed_wall_seconds() const { return std::nullopt; }
};

// ---------------------------------------------------------------------------
// Scripted backend: canned responses per agent, consumed in order.
// Script file shape:
//   { "version": 1,
//     "turns": { "<agent>": [ { ...response fields..., "sleep_ms": 0 } ] } }
// Each turn object is a response (content / tool_calls / stop_reason /
// usage) plus optional "sleep_ms" (simulates latency) and "fail" (throws).
// ---------------------------------------------------------------------------
class MockBackend : public Backend {
public:
    struct Turn {
        CompletionResponse response;
        long sleep_ms = 0;
        bool fail = false;
        std::string fail_message;
    };

    static MockBackend from_json(const nlohmann::json& script);
    static MockBackend from_file(const std::filesystem::path& path);

    CompletionResponse complete(const CompletionRequest& req) override;
    std::string name() const override { return "mock"; }
    size_t remaining(const std::string& agent) const;

private:
    std::map<std::string, std::deque<Turn>> turns_;
};

// ---------------------------------------------------------------------------
// Replay backend: answers from a recorded log, enforcing that each request
// fingerprints identically to the one recorded at that position.
// ---------------------------------------------------------------------------
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const Trajectory& recorded);

    CompletionResponse complete(const CompletionRequest& req) override;
    std::string name() const override { return "replay"; }
    std::optional<double> replayed_wall_seconds() const override { return last_wall_; }
    size_t remaining() const { return turns_.size() - cursor_; }

private:
    std::vector<nlohmann::json> turns_; // recorded turn event payloads
    size_t cursor_ = 0;
    std::optional<double> last_wall_;
};

// ---------------------------------------------------------------------------
// Live backend: OpenAI-compatible chat-completions endpoint over HTTP, with
// bounded retries and exponential backoff on transport errors, 429s, and
// 5xx responses.
// ---------------------------------------------------------------------------
class LiveBackend : public Backend {
public:
    struct Options {
        std::string base_url = "http://127.0.0.1:8080/v1";
        std::string api_key;
        int max_attempts = 3;
        long backoff_base_ms = 200;
        long timeout_seconds = 600;
    };
    explicit LiveBackend(Options opts) : opts_(std::move(opts)) {}

    CompletionResponse complete(const CompletionRequest& req) override;
    std::string name() const override { return "live"; }

    // Wire translation, exposed for tests.
    static nlohmann::json to_wire(const CompletionRequest& req);
    static CompletionResponse from_wire(const nlohmann::json& body);

private:
    Options opts_;
};

// ---------------------------------------------------------------------------
// The single entry point agents use. Adds ledger accounting and (when a
// writer is attached) a "turn" log event for every completion.
// ---------------------------------------------------------------------------
class Gateway {
public:
    Gateway(std::unique_ptr<Backend> backend, core::RateTable rates,
            TrajectoryWriter* log = nullptr)
        : backend_(std::move(backend)), log_(log) {
        ledger_.rates = rates;
    }

    CompletionResponse complete(const std::string& agent, CompletionRequest req);

    const core::CostLedger& ledger() const { return ledger_; }
    Backend& backend() { return *backend_; }
    void attach_log(TrajectoryWriter* log) { log_ = log; }

private:
    std::unique_ptr<Backend> backend_;
    TrajectoryWriter* log_;
    core::CostLedger ledger_;
};

} // namespace xlate::llm
