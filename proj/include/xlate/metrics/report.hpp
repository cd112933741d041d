#pragma once

#include "xlate/metrics/compare.hpp"
#include "xlate/metrics/trajectory_graph.hpp"
#include "xlate/validation/report.hpp"

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xlate::metrics {

// One project's validation outcome, Table-style: compilation success,
// tests executed/passed/failed, and line coverage before/after generated
// tests.
struct RunRow {
    std::string project;
    bool compile_success = false;
    int tests_executed = 0;
    int tests_passed = 0;
    int tests_failed = 0;
    std::optional<double> coverage_percent;
    std::optional<double> coverage_percent_with_generated;

    bool operator==(const RunRow&) const = default;
};

RunRow run_row_from_report(const std::string& project, const validation::ValidationReport& r);

// Everything one metrics invocation produced. All sections are optional;
// an empty report still renders (header only).
struct MetricsReport {
    std::vector<RunRow> runs;
    std::vector<std::pair<std::string, TestPairMetrics>> test_pairs; // (label, metrics)
    std::optional<TrajectoryMetrics> trajectory;
    std::optional<nlohmann::json> cost; // ledger_to_json output

    bool operator==(const MetricsReport&) const = default;
};

// Aligned-text table for humans. Deterministic; sections appear only when
// they have content.
std::string render_table(const MetricsReport& r);

// Line-delimited JSON records for machines: a header record carrying the
// format version, the abstraction version, and the equal-output counting
// basis, followed by one record per row/pair/section. parse_records
// round-trips exactly and rejects unknown versions and record types.
std::string render_records(const MetricsReport& r);
MetricsReport parse_records(const std::string& text);

} // namespace xlate::metrics
