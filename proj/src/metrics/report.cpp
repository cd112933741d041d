#include "xlate/metrics/report.hpp"

#include "xlate/util/strings.hpp"

#include <algorithm>
#include <cstdio>

namespace xlate::metrics {

using nlohmann::json;

RunRow run_row_from_report(const std::string& project, const validation::ValidationReport& r) {
    RunRow row;
    row.project = project;
    row.compile_success = r.compile_ok;
    validation::TestCounts c = validation::count_outcomes(r.tests.outcomes);
    row.tests_executed = c.executed;
    row.tests_passed = c.passed;
    row.tests_failed = c.failed;
    if (r.coverage) {
        row.coverage_percent = r.coverage->percent;
        row.coverage_percent_with_generated = r.coverage->percent_with_generated;
    }
    return row;
}

namespace {

constexpr int kRecordsVersion = 1;
constexpr const char* kEqualOutputBasis = "per-assertion";

std::string fmt1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Renders rows as space-padded columns, each column as wide as its widest
// cell. Every row (header included) must have the same arity.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return "";
    std::vector<size_t> width(rows[0].size(), 0);
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line = "  ";
        for (size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        out += line + "\n";
    }
    return out;
}

json pair_to_json(const std::string& label, const TestPairMetrics& m) {
    return {{"type", "test_pair"},
            {"label", label},
            {"src_assertions", m.src_assertions},
            {"tgt_assertions", m.tgt_assertions},
            {"count_match", m.count_match},
            {"equal_output_total", m.equal_output_total},
            {"equal_output_matching", m.equal_output_matching},
            {"type_match_percent", m.type_match_percent},
            {"cosine", m.cosine_similarity},
            {"src_loc", m.src_loc},
            {"tgt_loc", m.tgt_loc},
            {"src_method_invocations", m.src_method_invocations},
            {"tgt_method_invocations", m.tgt_method_invocations}};
}

TestPairMetrics pair_from_json(const json& j) {
    TestPairMetrics m;
    m.src_assertions = j.at("src_assertions").get<int>();
    m.tgt_assertions = j.at("tgt_assertions").get<int>();
    m.count_match = j.at("count_match").get<bool>();
    m.equal_output_total = j.at("equal_output_total").get<int>();
    m.equal_output_matching = j.at("equal_output_matching").get<int>();
    m.type_match_percent =
        j.at("type_match_percent").get<std::map<std::string, double>>();
    m.cosine_similarity = j.at("cosine").get<double>();
    m.src_loc = j.at("src_loc").get<int>();
    m.tgt_loc = j.at("tgt_loc").get<int>();
    m.src_method_invocations = j.at("src_method_invocations").get<int>();
    m.tgt_method_invocations = j.at("tgt_method_invocations").get<int>();
    return m;
}

} // namespace

std::string render_records(const MetricsReport& r) {
    std::string out;
    json header = {{"type", "metrics_header"},
                   {"version", kRecordsVersion},
                   {"abstraction", kTrajectoryAbstraction},
                   {"equal_output_basis", kEqualOutputBasis}};
    out += header.dump() + "\n";

    for (const auto& row : r.runs) {
        json j = {{"type", "run"},
                  {"project", row.project},
                  {"cs", row.compile_success},
                  {"te", row.tests_executed},
                  {"tp", row.tests_passed},
                  {"tf", row.tests_failed},
                  {"c", row.coverage_percent ? json(*row.coverage_percent) : json()},
                  {"c_plus", row.coverage_percent_with_generated
                                 ? json(*row.coverage_percent_with_generated)
                                 : json()}};
        out += j.dump() + "\n";
    }
    for (const auto& [label, m] : r.test_pairs) {
        out += pair_to_json(label, m).dump() + "\n";
    }
    if (r.trajectory) {
        json j = {{"type", "trajectory"}, {"nc", r.trajectory->nc},   {"tec", r.trajectory->tec},
                  {"sec", r.trajectory->sec}, {"lc", r.trajectory->lc}, {"all", r.trajectory->all}};
        out += j.dump() + "\n";
    }
    if (r.cost) {
        json j = {{"type", "cost"}, {"ledger", *r.cost}};
        out += j.dump() + "\n";
    }
    return out;
}

MetricsReport parse_records(const std::string& text) {
    MetricsReport r;
    bool saw_header = false;
    size_t lineno = 0;
    for (const auto& line : util::split_lines(text)) {
        ++lineno;
        if (util::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw MetricsError("metrics records line " + std::to_string(lineno) +
                               " is not a JSON object");
        }
        std::string type = j.value("type", "");
        if (!saw_header) {
            if (type != "metrics_header") {
                throw MetricsError("metrics records must start with a metrics_header record");
            }
            int version = j.value("version", -1);
            if (version != kRecordsVersion) {
                throw MetricsError("unsupported metrics records version " +
                                   std::to_string(version));
            }
            saw_header = true;
            continue;
        }
        if (type == "run") {
            RunRow row;
            row.project = j.at("project").get<std::string>();
            row.compile_success = j.at("cs").get<bool>();
            row.tests_executed = j.at("te").get<int>();
            row.tests_passed = j.at("tp").get<int>();
            row.tests_failed = j.at("tf").get<int>();
            if (!j.at("c").is_null()) row.coverage_percent = j["c"].get<double>();
            if (!j.at("c_plus").is_null()) {
                row.coverage_percent_with_generated = j["c_plus"].get<double>();
            }
            r.runs.push_back(std::move(row));
        } else if (type == "test_pair") {
            r.test_pairs.push_back({j.at("label").get<std::string>(), pair_from_json(j)});
        } else if (type == "trajectory") {
            TrajectoryMetrics t;
            t.nc = j.at("nc").get<long>();
            t.tec = j.at("tec").get<long>();
            t.sec = j.at("sec").get<long>();
            t.lc = j.at("lc").get<long>();
            t.all = j.at("all").get<double>();
            r.trajectory = t;
        } else if (type == "cost") {
            r.cost = j.at("ledger");
        } else {
            throw MetricsError("metrics records line " + std::to_string(lineno) +
                               ": unknown record type '" + type + "'");
        }
    }
    if (!saw_header) throw MetricsError("metrics records are empty (no header record)");
    return r;
}

std::string render_table(const MetricsReport& r) {
    std::string out = std::string("metrics report v") + std::to_string(kRecordsVersion) +
                      " | " + kTrajectoryAbstraction +
                      " | equal-output basis: " + kEqualOutputBasis + "\n";

    if (!r.runs.empty()) {
        out += "\nruns:\n";
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"project", "CS", "TE", "TP", "TF", "C", "C+"});
        for (const auto& row : r.runs) {
            rows.push_back({row.project, row.compile_success ? "yes" : "no",
                            std::to_string(row.tests_executed),
                            std::to_string(row.tests_passed),
                            std::to_string(row.tests_failed),
                            row.coverage_percent ? fmt1(*row.coverage_percent) : "-",
                            row.coverage_percent_with_generated
                                ? fmt1(*row.coverage_percent_with_generated)
                                : "-"});
        }
        out += aligned(rows);
    }

    if (!r.test_pairs.empty()) {
        out += "\ntest pairs:\n";
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"pair", "asserts", "match", "equal-out", "type-match%", "cosine",
                        "loc", "calls"});
        for (const auto& [label, m] : r.test_pairs) {
            auto pct = [&](const char* kind) {
                auto it = m.type_match_percent.find(kind);
                return it == m.type_match_percent.end() ? std::string("-") : fmt1(it->second);
            };
            rows.push_back(
                {label,
                 std::to_string(m.src_assertions) + "/" + std::to_string(m.tgt_assertions),
                 m.count_match ? "yes" : "no",
                 std::to_string(m.equal_output_matching) + "/" +
                     std::to_string(m.equal_output_total - m.equal_output_matching),
                 pct("assert_equal") + "/" + pct("assert_true") + "/" + pct("assert_false") +
                     "/" + pct("other"),
                 fmt4(m.cosine_similarity),
                 std::to_string(m.src_loc) + "/" + std::to_string(m.tgt_loc),
                 std::to_string(m.src_method_invocations) + "/" +
                     std::to_string(m.tgt_method_invocations)});
        }
        out += aligned(rows);
    }

    if (r.trajectory) {
        out += "\ntrajectory: NC=" + std::to_string(r.trajectory->nc) +
               " TEC=" + std::to_string(r.trajectory->tec) +
               " SEC=" + std::to_string(r.trajectory->sec) +
               " LC=" + std::to_string(r.trajectory->lc) + " ALL=" + fmt1(r.trajectory->all) +
               "\n";
    }

    if (r.cost) {
        double dollars = r.cost->value("dollars", 0.0);
        long long total_in = 0, total_out = 0;
        if (r.cost->contains("total")) {
            total_in = (*r.cost)["total"].value("input_tokens", 0LL);
            total_out = (*r.cost)["total"].value("output_tokens", 0LL);
        }
        char buf[128];
        std::snprintf(buf, sizeof buf, "\ncost: %lld input + %lld output tokens, $%.6f\n",
                      total_in, total_out, dollars);
        out += buf;
    }
    return out;
}

} // namespace xlate::metrics
