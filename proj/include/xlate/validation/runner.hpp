#pragma once

#include "xlate/core/types.hpp"
#include "xlate/validation/coverage.hpp"
#include "xlate/validation/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xlate::validation {

// Outcome of the profile's build (or syntax-check) command.
struct BuildResult {
    bool ok = false;
    int exit_code = -1; // -1: command could not be launched
    bool timed_out = false;
    std::vector<std::string> diagnostics; // non-blank stderr lines (stdout fallback)
    std::string output;                   // raw stdout + stderr
    std::vector<std::string> argv;
    double duration_seconds = 0.0;
    std::string snapshot; // caller-assigned tree identity, checked at assembly
};

BuildResult build(const core::Project& project, const core::LanguageProfile& profile,
                  long timeout_ms = 600000);

// Parsed machine-readable runner output, before process-level verdicts.
struct ParsedResults {
    std::vector<TestOutcome> outcomes;
    bool aborted = false;     // the output itself says the run died early
    std::string abort_reason;
};

// One parser per supported schema; `format` dispatches between them.
ParsedResults parse_results(const std::string& text, const std::string& format);
ParsedResults parse_results_jsonl(const std::string& text);
ParsedResults parse_results_tap(const std::string& text);
ParsedResults parse_results_go_json(const std::string& text);

// Full test pass: run test_command, parse its output, then (when
// configured) run coverage_command and parse the normalized coverage.
struct TestRunResult {
    SuiteResult suite;
    std::optional<CoverageData> coverage;
    std::vector<std::string> argv;
    int exit_code = -1;
    bool timed_out = false;
    double duration_seconds = 0.0;
    std::vector<std::string> coverage_argv;
    int coverage_exit_code = 0;
    std::string snapshot;
};

TestRunResult run_tests(const core::Project& project, const core::LanguageProfile& profile,
                        const std::string& filter = "", long timeout_ms = 600000);

// One language side of a function parity check.
struct ParitySide {
    std::string root;      // project root
    std::string test_file; // root-relative test file exercising the fragment
    core::LanguageProfile profile;
};

// Runs the paired tests on both sides. Success iff both sides collected at
// least one test and every collected test passed; anything else — failures,
// crashes, empty collections — fails with per-side payloads. There is no
// configuration under which a non-passing side yields success.
FunctionCheck function_parity_check(const core::Fragment& fragment, const ParitySide& source,
                                    const ParitySide& target, long timeout_ms = 600000);

// Everything one validation pass produced, ready to consolidate.
struct AssembleInput {
    BuildResult build;
    TestRunResult tests;
    std::optional<TestRunResult> generated_tests;
    std::vector<core::Fragment> fragments;      // plan manifest
    std::vector<std::string> known_files;       // project tree, root-relative
    std::vector<FunctionCheck> function_checks;
};

// Consolidates parts into the report: counts, coverage before/after
// generated tests, the coverage gap against the manifest, and the
// all-success verdict. Parts tagged with different snapshots mixed into
// one report indicate a harness bug: ValidationError.
ValidationReport assemble_report(const AssembleInput& input);

} // namespace xlate::validation
