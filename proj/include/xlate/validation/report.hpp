#pragma once

#include "xlate/validation/coverage.hpp"

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xlate::validation {

enum class TestStatus { Pass, Fail, Error, Skipped, NotCollected };

const char* test_status_name(TestStatus s);
std::optional<TestStatus> test_status_from_name(const std::string& name);

// One test's result. message/trace carry the failure payload and are
// populated exactly when status is Fail or Error; a crashed runner's
// payload lives on the suite summary, not on its NotCollected entries.
struct TestOutcome {
    std::string test_id;
    TestStatus status = TestStatus::Pass;
    std::string message;
    std::string trace;

    bool operator==(const TestOutcome&) const = default;
};

// Counts derived from an outcome list. "Executed" covers pass/fail/error;
// skipped and never-collected tests did not run.
struct TestCounts {
    int executed = 0;
    int passed = 0;
    int failed = 0;
    int errors = 0;
    int skipped = 0;
    int not_collected = 0;

    bool operator==(const TestCounts&) const = default;
};

TestCounts count_outcomes(const std::vector<TestOutcome>& outcomes);

// One suite execution (developer tests, or agent-generated tests).
struct SuiteResult {
    std::vector<TestOutcome> outcomes;
    bool empty_suite = false;    // ran cleanly but collected nothing
    bool runner_crashed = false; // runner died / aborted / partial results
    std::string crash_payload;   // why, when runner_crashed

    bool operator==(const SuiteResult&) const = default;
};

// Coverage percentages: with developer tests alone, and with generated
// tests folded in (equal when there are none).
struct CoverageSummary {
    double percent = 0.0;
    double percent_with_generated = 0.0;

    bool operator==(const CoverageSummary&) const = default;
};

// Paired per-fragment test execution in both languages. Success requires
// both sides to pass; payloads explain each failing side.
struct FunctionCheck {
    std::string fragment; // identity "<file>:<qualified_name>"
    bool success = false;
    std::string source_payload;
    std::string target_payload;

    bool operator==(const FunctionCheck&) const = default;
};

struct ValidationReport {
    int version = 1;
    std::string snapshot; // identity tag of the project tree all parts saw
    bool compile_ok = false;
    int compile_exit_code = 0;
    std::vector<std::string> compile_diagnostics;
    SuiteResult tests;
    std::optional<SuiteResult> generated_tests;
    std::optional<CoverageSummary> coverage;
    std::vector<std::string> uncovered_fragments;
    std::vector<FunctionCheck> function_checks;
    bool all_success = false;
};

// The iterate/stop predicate: compiled, no failing or erroring or lost
// tests in the developer suite, the runner stayed alive, and — policy —
// the generated suite holds to the same standard when present.
bool compute_all_success(const ValidationReport& r);

// Test ids that implicate fragments for repair: every outcome that is not
// a pass or an explicit skip, developer and generated suites combined.
std::vector<std::string> failing_test_ids(const ValidationReport& r);

nlohmann::json outcome_to_json(const TestOutcome& o);
TestOutcome outcome_from_json(const nlohmann::json& j);

// Serialized form is versioned and deterministic (no timestamps), so a
// replayed run reproduces report.json byte for byte. Parsing revalidates
// the stored counts and the all_success flag against the outcome lists and
// throws ValidationError on any inconsistency.
nlohmann::json report_to_json(const ValidationReport& r);
ValidationReport report_from_json(const nlohmann::json& j);

} // namespace xlate::validation
