#include "xlate/llm/trajectory.hpp"

#include "xlate/util/strings.hpp"

namespace xlate::llm {

nlohmann::json header_to_json(const TrajectoryHeader& h) {
    nlohmann::json j = h.extra.is_object() ? h.extra : nlohmann::json::object();
    j["type"] = "header";
    j["version"] = h.version;
    j["run_id"] = h.run_id;
    j["source_language"] = h.source_language;
    j["target_language"] = h.target_language;
    j["config_hash"] = h.config_hash;
    j["created_unix_ms"] = h.created_unix_ms;
    return j;
}

TrajectoryHeader header_from_json(const nlohmann::json& j) {
    TrajectoryHeader h;
    h.version = j.at("version").get<int>();
    h.run_id = j.value("run_id", "");
    h.source_language = j.value("source_language", "");
    h.target_language = j.value("target_language", "");
    h.config_hash = j.value("config_hash", "");
    h.created_unix_ms = j.value("created_unix_ms", 0L);
    for (const auto& [key, value] : j.items()) {
        if (key == "type" || key == "version" || key == "run_id" ||
            key == "source_language" || key == "target_language" || key == "config_hash" ||
            key == "created_unix_ms") {
            continue;
        }
        h.extra[key] = value;
    }
    return h;
}

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& path,
                                   const TrajectoryHeader& header)
    : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::trunc);
    if (!out_) throw TrajectoryError("cannot open log for writing: " + path.string());
    write_line(header_to_json(header));
}

void TrajectoryWriter::write_line(const nlohmann::json& j) {
    out_ << j.dump() << "\n";
    out_.flush();
    if (!out_) throw TrajectoryError("log write failed: " + path_.string());
}

long TrajectoryWriter::append(const std::string& kind, nlohmann::json data) {
    if (finalized_) throw TrajectoryError("log already finalized: " + path_.string());
    long seq = next_seq_++;
    nlohmann::json j = std::move(data);
    j["type"] = "event";
    j["seq"] = seq;
    j["kind"] = kind;
    write_line(j);
    if (kind == "end") finalized_ = true;
    return seq;
}

void TrajectoryWriter::finalize(const std::string& status, nlohmann::json detail) {
    if (finalized_) return;
    nlohmann::json data = nlohmann::json::object();
    data["status"] = status;
    if (!(detail.is_object() && detail.empty())) data["detail"] = detail;
    append("end", std::move(data));
}

const TrajectoryEvent* Trajectory::end_event() const {
    if (!events.empty() && events.back().kind == "end") return &events.back();
    return nullptr;
}

std::vector<const TrajectoryEvent*> Trajectory::turns() const {
    std::vector<const TrajectoryEvent*> out;
    for (const auto& e : events) {
        if (e.kind == "turn") out.push_back(&e);
    }
    return out;
}

Trajectory parse_trajectory(const std::string& text) {
    Trajectory t;
    bool have_header = false;
    bool ended = false;
    long expected_seq = 1;

    size_t lineno = 0;
    for (const auto& line : util::split_lines(text)) {
        ++lineno;
        if (util::trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw TrajectoryError("line " + std::to_string(lineno) + " is not a JSON object");
        }
        std::string type = j.value("type", "");
        if (!have_header) {
            if (type != "header") {
                throw TrajectoryError("first line must be the header, got type '" + type + "'");
            }
            t.header = header_from_json(j);
            if (t.header.version != 1) {
                throw TrajectoryError("unsupported log version " +
                                      std::to_string(t.header.version));
            }
            have_header = true;
            continue;
        }
        if (type == "header") throw TrajectoryError("duplicate header at line " + std::to_string(lineno));
        if (type != "event") {
            throw TrajectoryError("line " + std::to_string(lineno) + " has unknown type '" +
                                  type + "'");
        }
        if (ended) {
            throw TrajectoryError("event after the end marker at line " + std::to_string(lineno));
        }
        TrajectoryEvent e;
        e.seq = j.value("seq", 0L);
        e.kind = j.value("kind", "");
        if (e.seq != expected_seq) {
            throw TrajectoryError("sequence break at line " + std::to_string(lineno) +
                                  ": expected " + std::to_string(expected_seq) + ", got " +
                                  std::to_string(e.seq));
        }
        ++expected_seq;
        if (e.kind.empty()) {
            throw TrajectoryError("event without a kind at line " + std::to_string(lineno));
        }
        for (const auto& [key, value] : j.items()) {
            if (key == "type" || key == "seq" || key == "kind") continue;
            e.data[key] = value;
        }
        if (e.kind == "end") ended = true;
        t.events.push_back(std::move(e));
    }
    if (!have_header) throw TrajectoryError("log is empty");
    return t;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TrajectoryError("cannot open log: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_trajectory(text);
}

core::CostLedger ledger_from_trajectory(const Trajectory& t, const core::RateTable& rates) {
    core::CostLedger ledger;
    ledger.rates = rates;
    for (const auto* turn : t.turns()) {
        const auto& usage = turn->data.at("response").at("usage");
        long long in_tok = usage.value("input_tokens", 0LL);
        long long out_tok = usage.value("output_tokens", 0LL);
        double secs = turn->data.value("wall_seconds", 0.0);
        ledger = core::ledger_add(ledger, turn->data.at("agent").get<std::string>(), in_tok,
                                  out_tok, secs);
    }
    return ledger;
}

} // namespace xlate::llm
