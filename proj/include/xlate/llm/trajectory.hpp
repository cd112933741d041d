#pragma once

#include "xlate/core/ledger.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xlate::llm {

struct TrajectoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First line of every log file. `extra` round-trips unrecognized fields.
struct TrajectoryHeader {
    int version = 1;
    std::string run_id;
    std::string source_language;
    std::string target_language;
    std::string config_hash;
    long created_unix_ms = 0;
    nlohmann::json extra = nlohmann::json::object();
};

// Every subsequent line. `data` holds the kind-specific fields, which are
// flattened alongside type/seq/kind on disk so logs stay greppable.
struct TrajectoryEvent {
    long seq = 0;
    std::string kind; // "phase" | "turn" | "tool" | "end"
    nlohmann::json data = nlohmann::json::object();
};

nlohmann::json header_to_json(const TrajectoryHeader& h);
TrajectoryHeader header_from_json(const nlohmann::json& j);

// Append-only writer. Every line is flushed as soon as it is written, so a
// process killed mid-run still leaves a parseable prefix; finalize() seals
// the log with a terminal "end" event.
class TrajectoryWriter {
public:
    TrajectoryWriter(const std::filesystem::path& path, const TrajectoryHeader& header);

    long append(const std::string& kind, nlohmann::json data);
    void finalize(const std::string& status, nlohmann::json detail = nlohmann::json::object());
    bool finalized() const { return finalized_; }
    const std::filesystem::path& path() const { return path_; }

private:
    void write_line(const nlohmann::json& j);

    std::filesystem::path path_;
    std::ofstream out_;
    long next_seq_ = 1;
    bool finalized_ = false;
};

struct Trajectory {
    TrajectoryHeader header;
    std::vector<TrajectoryEvent> events;

    const TrajectoryEvent* end_event() const;
    std::vector<const TrajectoryEvent*> turns() const;
};

// Parses and validates a log: header first, exactly version 1, seq counting
// 1,2,3,... with no gaps, and nothing after an "end" event.
Trajectory read_trajectory(const std::filesystem::path& path);
Trajectory parse_trajectory(const std::string& text);

// Rebuilds the cost ledger from the log's turn events. Running this over a
// recorded log must reproduce the run's ledger exactly.
core::CostLedger ledger_from_trajectory(const Trajectory& t, const core::RateTable& rates);

} // namespace xlate::llm
