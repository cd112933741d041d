#include "xlate/validation/runner.hpp"

#include "xlate/core/config.hpp"
#include "xlate/util/strings.hpp"
#include "xlate/util/subprocess.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace xlate::validation {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> nonblank_lines(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& line : util::split_lines(text)) {
        if (!util::trim(line).empty()) out.push_back(line);
    }
    return out;
}

std::string tail_of(const std::string& text, size_t max_chars = 2000) {
    if (text.size() <= max_chars) return text;
    return "..." + text.substr(text.size() - max_chars);
}

// Failure payload fields are meaningful only on fail/error outcomes; keep
// the invariant at the source instead of policing it everywhere.
void normalize_payload(TestOutcome& o) {
    bool failing = o.status == TestStatus::Fail || o.status == TestStatus::Error;
    if (failing) {
        if (o.message.empty()) o.message = "(no message captured)";
    } else {
        o.message.clear();
        o.trace.clear();
    }
}

} // namespace

// ------------------------------- jsonl -------------------------------------
// Our adapter schema: one JSON object per line.
//   {"type":"plan","tests":["a","b",...]}            (optional, first)
//   {"type":"result","test":"a","status":"pass",...}
//   {"type":"summary",...}                           (ignored)
// Planned tests that never report a result are marked not_collected — a
// complete run always accounts for its whole plan.

ParsedResults parse_results_jsonl(const std::string& text) {
    ParsedResults out;
    std::vector<std::string> plan;
    std::set<std::string> reported;

    size_t lineno = 0;
    for (const auto& line : util::split_lines(text)) {
        ++lineno;
        if (util::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw ValidationError("test output line " + std::to_string(lineno) +
                                  " is not a JSON object");
        }
        std::string type = j.value("type", "");
        if (type == "plan") {
            for (const auto& t : j.at("tests")) plan.push_back(t.get<std::string>());
        } else if (type == "result") {
            TestOutcome o;
            o.test_id = j.at("test").get<std::string>();
            std::string status = j.at("status").get<std::string>();
            auto parsed = test_status_from_name(status);
            if (!parsed) {
                throw ValidationError("test output line " + std::to_string(lineno) +
                                      ": unknown status '" + status + "'");
            }
            o.status = *parsed;
            o.message = j.value("message", "");
            o.trace = j.value("trace", "");
            normalize_payload(o);
            reported.insert(o.test_id);
            out.outcomes.push_back(std::move(o));
        } else if (type == "summary") {
            // Informational; counts are recomputed from the outcomes.
        } else {
            throw ValidationError("test output line " + std::to_string(lineno) +
                                  ": unknown record type '" + type + "'");
        }
    }

    for (const auto& id : plan) {
        if (reported.count(id)) continue;
        TestOutcome o;
        o.test_id = id;
        o.status = TestStatus::NotCollected;
        out.outcomes.push_back(std::move(o));
        out.aborted = true;
        out.abort_reason = "planned tests never reported a result";
    }
    return out;
}

// -------------------------------- TAP --------------------------------------
// The classic subset: a "1..N" plan, "ok"/"not ok" result lines with
// optional numbers and SKIP/TODO directives, indented YAML blocks carrying
// failure details, and "Bail out!". Lines TAP defines as ignorable are
// ignored; there is no free-text guessing beyond that.

ParsedResults parse_results_tap(const std::string& text) {
    ParsedResults out;
    long planned = -1;
    long next_number = 1;
    std::set<long> seen;
    bool in_yaml = false;
    std::vector<std::string> yaml_lines;

    auto flush_yaml = [&]() {
        if (yaml_lines.empty() || out.outcomes.empty()) {
            yaml_lines.clear();
            return;
        }
        TestOutcome& o = out.outcomes.back();
        if (o.status == TestStatus::Fail || o.status == TestStatus::Error) {
            std::string block;
            for (const auto& l : yaml_lines) block += l + "\n";
            o.trace = block;
            for (const auto& l : yaml_lines) {
                std::string t = util::trim(l);
                if (t.rfind("message:", 0) == 0) {
                    std::string m = util::trim(t.substr(8));
                    if (!m.empty()) o.message = m;
                    break;
                }
            }
        }
        yaml_lines.clear();
    };

    for (const auto& raw : util::split_lines(text)) {
        std::string line = raw;
        while (!line.empty() && (line.back() == '\r')) line.pop_back();
        std::string trimmed = util::trim(line);

        if (in_yaml) {
            if (trimmed == "...") {
                in_yaml = false;
                flush_yaml();
            } else {
                yaml_lines.push_back(trimmed);
            }
            continue;
        }
        if (!line.empty() && line[0] == ' ' && trimmed == "---") {
            in_yaml = true;
            continue;
        }
        if (trimmed.empty()) continue;
        if (trimmed.rfind("TAP version", 0) == 0) continue;
        if (trimmed[0] == '#') continue;

        if (trimmed.rfind("Bail out!", 0) == 0) {
            out.aborted = true;
            out.abort_reason = util::trim(trimmed.substr(9));
            if (out.abort_reason.empty()) out.abort_reason = "bailed out";
            break; // TAP: nothing after a bail-out is meaningful
        }
        if (trimmed.rfind("1..", 0) == 0) {
            try {
                planned = std::stol(trimmed.substr(3));
            } catch (const std::exception&) {
                throw ValidationError("TAP plan line is malformed: '" + trimmed + "'");
            }
            continue;
        }

        bool ok = false;
        std::string rest;
        if (trimmed.rfind("ok", 0) == 0 && (trimmed.size() == 2 || trimmed[2] == ' ')) {
            ok = true;
            rest = util::trim(trimmed.substr(2));
        } else if (trimmed.rfind("not ok", 0) == 0 &&
                   (trimmed.size() == 6 || trimmed[6] == ' ')) {
            ok = false;
            rest = util::trim(trimmed.substr(6));
        } else {
            continue; // TAP: unrecognized lines are ignored
        }

        long number = next_number;
        size_t pos = 0;
        while (pos < rest.size() && isdigit(static_cast<unsigned char>(rest[pos]))) ++pos;
        if (pos > 0) {
            number = std::stol(rest.substr(0, pos));
            rest = util::trim(rest.substr(pos));
        }
        next_number = number + 1;
        seen.insert(number);

        std::string description = rest;
        std::string directive;
        size_t hash = rest.find('#');
        if (hash != std::string::npos) {
            description = util::trim(rest.substr(0, hash));
            directive = util::trim(rest.substr(hash + 1));
        }
        if (!description.empty() && description[0] == '-') {
            description = util::trim(description.substr(1));
        }

        TestOutcome o;
        o.test_id = description.empty() ? "test " + std::to_string(number) : description;
        std::string upper;
        for (char c : directive) upper += static_cast<char>(toupper(static_cast<unsigned char>(c)));
        if (upper.rfind("SKIP", 0) == 0) {
            o.status = TestStatus::Skipped;
        } else if (upper.rfind("TODO", 0) == 0) {
            // Expected failures are not failures; unexpected passes stay passes.
            o.status = ok ? TestStatus::Pass : TestStatus::Skipped;
        } else {
            o.status = ok ? TestStatus::Pass : TestStatus::Fail;
        }
        normalize_payload(o);
        out.outcomes.push_back(std::move(o));
    }
    if (in_yaml) flush_yaml();

    if (planned >= 0) {
        for (long n = 1; n <= planned; ++n) {
            if (seen.count(n)) continue;
            TestOutcome o;
            o.test_id = "test " + std::to_string(n);
            o.status = TestStatus::NotCollected;
            out.outcomes.push_back(std::move(o));
            if (!out.aborted) {
                out.aborted = true;
                out.abort_reason = "planned tests never reported a result";
            }
        }
    }
    return out;
}

// ----------------------------- go test -json --------------------------------
// The stream `go test -json` emits: one JSON object per line with Action,
// Package, optional Test, optional Output. Only test-scoped events matter
// here; package verdicts and timing events are skipped.

ParsedResults parse_results_go_json(const std::string& text) {
    ParsedResults out;
    struct Pending {
        std::string id;
        std::string output;
    };
    std::map<std::string, Pending> running; // key Package + "\n" + Test
    std::vector<std::string> running_order;

    auto finish = [&](const std::string& key, TestStatus status) {
        auto it = running.find(key);
        Pending pending;
        if (it != running.end()) {
            pending = it->second;
            running.erase(it);
            running_order.erase(
                std::find(running_order.begin(), running_order.end(), key));
        } else {
            pending.id = key.substr(key.find('\n') + 1);
        }
        TestOutcome o;
        o.test_id = pending.id;
        o.status = status;
        if (status == TestStatus::Fail) {
            for (const auto& line : util::split_lines(pending.output)) {
                std::string t = util::trim(line);
                if (t.find(".go:") != std::string::npos) {
                    o.message = t;
                    break;
                }
            }
            if (o.message.empty()) o.message = "(test failed)";
            o.trace = pending.output;
        }
        normalize_payload(o);
        out.outcomes.push_back(std::move(o));
    };

    size_t lineno = 0;
    for (const auto& line : util::split_lines(text)) {
        ++lineno;
        if (util::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw ValidationError("go test output line " + std::to_string(lineno) +
                                  " is not a JSON object");
        }
        std::string test = j.value("Test", "");
        if (test.empty()) continue; // package-scoped event
        std::string pkg = j.value("Package", "");
        std::string key = pkg + "\n" + test;
        std::string id = pkg.empty() ? test : pkg + "." + test;
        std::string action = j.value("Action", "");

        if (action == "run") {
            if (!running.count(key)) {
                running[key] = {id, ""};
                running_order.push_back(key);
            }
        } else if (action == "output") {
            if (!running.count(key)) {
                running[key] = {id, ""};
                running_order.push_back(key);
            }
            running[key].output += j.value("Output", "");
        } else if (action == "pass") {
            finish(key, TestStatus::Pass);
        } else if (action == "fail") {
            finish(key, TestStatus::Fail);
        } else if (action == "skip") {
            finish(key, TestStatus::Skipped);
        }
        // pause/cont/bench/start: no verdict, nothing to record
    }

    // Tests that started but never reached a verdict: the runner died.
    for (const auto& key : running_order) {
        TestOutcome o;
        o.test_id = running[key].id;
        o.status = TestStatus::NotCollected;
        out.outcomes.push_back(std::move(o));
        out.aborted = true;
        out.abort_reason = "test runner exited mid-test";
    }
    return out;
}

ParsedResults parse_results(const std::string& text, const std::string& format) {
    if (format == "jsonl") return parse_results_jsonl(text);
    if (format == "tap") return parse_results_tap(text);
    if (format == "go-test-json") return parse_results_go_json(text);
    throw ValidationError("unsupported test output format '" + format + "'");
}

// ------------------------------- build -------------------------------------

BuildResult build(const core::Project& project, const core::LanguageProfile& profile,
                  long timeout_ms) {
    if (profile.build_command.empty()) {
        throw ValidationError("profile '" + profile.language + "' has no build_command");
    }
    BuildResult r;
    r.argv = core::expand_command(profile.build_command, project.root);
    auto t0 = std::chrono::steady_clock::now();
    util::CommandResult res = util::run_command(r.argv, project.root, timeout_ms);
    r.duration_seconds = seconds_since(t0);
    r.exit_code = res.exit_code;
    r.timed_out = res.timed_out;
    r.ok = !res.timed_out && res.exit_code == 0;
    r.output = res.out + res.err;
    r.diagnostics = nonblank_lines(res.err);
    if (r.diagnostics.empty() && !r.ok) r.diagnostics = nonblank_lines(res.out);
    if (r.diagnostics.empty() && !r.ok) {
        r.diagnostics.push_back(
            res.timed_out ? "build timed out"
                          : "build command failed with exit code " +
                                std::to_string(res.exit_code) + ": " + r.argv[0]);
    }
    return r;
}

// ------------------------------ run_tests ----------------------------------

TestRunResult run_tests(const core::Project& project, const core::LanguageProfile& profile,
                        const std::string& filter, long timeout_ms) {
    if (profile.test_command.empty()) {
        throw ValidationError("profile '" + profile.language + "' has no test_command");
    }
    TestRunResult r;
    r.argv = core::expand_command(profile.test_command, project.root, "", filter);
    auto t0 = std::chrono::steady_clock::now();
    util::CommandResult res = util::run_command(r.argv, project.root, timeout_ms);
    r.duration_seconds = seconds_since(t0);
    r.exit_code = res.exit_code;
    r.timed_out = res.timed_out;

    ParsedResults parsed;
    std::string parse_error;
    bool parse_failed = false;
    try {
        parsed = parse_results(res.out, profile.test_output_format);
    } catch (const ValidationError& e) {
        // A runner that claims success must speak the schema; a dying one
        // gets its garbled output folded into the crash payload instead.
        if (res.exit_code == 0 && !res.timed_out) throw;
        parse_failed = true;
        parse_error = e.what();
    }
    r.suite.outcomes = std::move(parsed.outcomes);

    // Exit 1 is the runner convention for "ran, some tests failed";
    // anything else nonzero means the runner itself fell over.
    bool abnormal_exit = res.exit_code != 0 && res.exit_code != 1;
    r.suite.runner_crashed = res.timed_out || parse_failed || parsed.aborted ||
                             abnormal_exit ||
                             (res.exit_code != 0 && r.suite.outcomes.empty());
    if (r.suite.runner_crashed) {
        std::string why;
        if (res.timed_out) {
            why = "test runner timed out after " + std::to_string(timeout_ms) + " ms";
        } else if (parse_failed) {
            why = parse_error;
        } else if (parsed.aborted) {
            why = parsed.abort_reason;
        } else {
            why = "test runner exited with code " + std::to_string(res.exit_code);
        }
        std::string stderr_tail = tail_of(res.err);
        r.suite.crash_payload = stderr_tail.empty() ? why : why + "\n" + stderr_tail;
    }
    r.suite.empty_suite =
        !r.suite.runner_crashed && r.suite.outcomes.empty() && res.exit_code == 0;

    if (!r.suite.runner_crashed && !profile.coverage_command.empty()) {
        r.coverage_argv = core::expand_command(profile.coverage_command, project.root, "", filter);
        util::CommandResult cov = util::run_command(r.coverage_argv, project.root, timeout_ms);
        r.coverage_exit_code = cov.exit_code;
        if (cov.timed_out || cov.exit_code != 0) {
            throw ValidationError("coverage command failed (exit " +
                                  std::to_string(cov.exit_code) + "): " + tail_of(cov.err, 500));
        }
        r.coverage = parse_coverage(cov.out);
    }
    return r;
}

// --------------------------- function parity --------------------------------

namespace {

std::string describe_side(const TestRunResult& r) {
    TestCounts c = count_outcomes(r.suite.outcomes);
    std::string s = "exit " + std::to_string(r.exit_code) + "; executed " +
                    std::to_string(c.executed) + ", passed " + std::to_string(c.passed) +
                    ", failed " + std::to_string(c.failed) + ", errors " +
                    std::to_string(c.errors);
    if (c.skipped) s += ", skipped " + std::to_string(c.skipped);
    if (c.not_collected) s += ", not collected " + std::to_string(c.not_collected);
    if (r.suite.runner_crashed) s += "; runner crashed: " + r.suite.crash_payload;
    if (c.executed == 0 && !r.suite.runner_crashed) s += "; no tests collected";
    for (const auto& o : r.suite.outcomes) {
        if (o.status == TestStatus::Fail || o.status == TestStatus::Error) {
            s += "\nfirst failure: " + o.test_id + ": " + o.message;
            if (!o.trace.empty()) s += "\n" + o.trace;
            break;
        }
    }
    return s;
}

} // namespace

FunctionCheck function_parity_check(const core::Fragment& fragment, const ParitySide& source,
                                    const ParitySide& target, long timeout_ms) {
    FunctionCheck fc;
    fc.fragment = core::fragment_identity(fragment);

    auto run_side = [&](const ParitySide& side, std::string& payload) {
        core::Project proj;
        proj.root = side.root;
        proj.language = side.profile.language;
        TestRunResult r;
        try {
            r = run_tests(proj, side.profile, side.test_file, timeout_ms);
        } catch (const ValidationError& e) {
            payload = e.what();
            return false;
        }
        TestCounts c = count_outcomes(r.suite.outcomes);
        bool every_outcome_passed =
            c.passed == static_cast<int>(r.suite.outcomes.size()) && c.passed >= 1;
        if (!r.suite.runner_crashed && every_outcome_passed) return true;
        payload = describe_side(r);
        return false;
    };

    bool source_ok = run_side(source, fc.source_payload);
    bool target_ok = run_side(target, fc.target_payload);
    fc.success = source_ok && target_ok;
    return fc;
}

// ------------------------------ assembly -----------------------------------

ValidationReport assemble_report(const AssembleInput& input) {
    std::string snapshot;
    auto reconcile = [&snapshot](const std::string& s) {
        if (s.empty()) return;
        if (snapshot.empty()) {
            snapshot = s;
        } else if (snapshot != s) {
            throw ValidationError("validation parts come from different project snapshots: '" +
                                  snapshot + "' vs '" + s + "'");
        }
    };
    reconcile(input.build.snapshot);
    reconcile(input.tests.snapshot);
    if (input.generated_tests) reconcile(input.generated_tests->snapshot);

    ValidationReport r;
    r.snapshot = snapshot;
    r.compile_ok = input.build.ok;
    r.compile_exit_code = input.build.exit_code;
    r.compile_diagnostics = input.build.diagnostics;
    r.tests = input.tests.suite;
    if (input.generated_tests) r.generated_tests = input.generated_tests->suite;

    std::optional<CoverageData> merged;
    if (input.tests.coverage) merged = *input.tests.coverage;
    if (input.generated_tests && input.generated_tests->coverage) {
        merged = merged ? merge_coverage(*merged, *input.generated_tests->coverage)
                        : *input.generated_tests->coverage;
    }
    if (merged) {
        CoverageSummary cs;
        cs.percent =
            input.tests.coverage ? coverage_percent(*input.tests.coverage) : 0.0;
        cs.percent_with_generated = coverage_percent(*merged);
        r.coverage = cs;
        r.uncovered_fragments = coverage_gap(input.fragments, *merged, input.known_files);
    }
    r.function_checks = input.function_checks;
    r.all_success = compute_all_success(r);
    return r;
}

} // namespace xlate::validation
