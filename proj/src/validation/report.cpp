#include "xlate/validation/report.hpp"

namespace xlate::validation {

const char* test_status_name(TestStatus s) {
    switch (s) {
    case TestStatus::Pass: return "pass";
    case TestStatus::Fail: return "fail";
    case TestStatus::Error: return "error";
    case TestStatus::Skipped: return "skipped";
    case TestStatus::NotCollected: return "not_collected";
    }
    return "pass";
}

std::optional<TestStatus> test_status_from_name(const std::string& name) {
    if (name == "pass") return TestStatus::Pass;
    if (name == "fail") return TestStatus::Fail;
    if (name == "error") return TestStatus::Error;
    if (name == "skipped") return TestStatus::Skipped;
    if (name == "not_collected") return TestStatus::NotCollected;
    return std::nullopt;
}

TestCounts count_outcomes(const std::vector<TestOutcome>& outcomes) {
    TestCounts c;
    for (const auto& o : outcomes) {
        switch (o.status) {
        case TestStatus::Pass: ++c.passed; break;
        case TestStatus::Fail: ++c.failed; break;
        case TestStatus::Error: ++c.errors; break;
        case TestStatus::Skipped: ++c.skipped; break;
        case TestStatus::NotCollected: ++c.not_collected; break;
        }
    }
    c.executed = c.passed + c.failed + c.errors;
    return c;
}

namespace {

bool suite_clean(const SuiteResult& s) {
    TestCounts c = count_outcomes(s.outcomes);
    return !s.runner_crashed && c.failed == 0 && c.errors == 0 && c.not_collected == 0;
}

} // namespace

bool compute_all_success(const ValidationReport& r) {
    if (!r.compile_ok) return false;
    if (!suite_clean(r.tests)) return false;
    if (r.generated_tests && !suite_clean(*r.generated_tests)) return false;
    return true;
}

std::vector<std::string> failing_test_ids(const ValidationReport& r) {
    std::vector<std::string> ids;
    auto collect = [&ids](const SuiteResult& s) {
        for (const auto& o : s.outcomes) {
            if (o.status == TestStatus::Fail || o.status == TestStatus::Error ||
                o.status == TestStatus::NotCollected) {
                ids.push_back(o.test_id);
            }
        }
    };
    collect(r.tests);
    if (r.generated_tests) collect(*r.generated_tests);
    return ids;
}

nlohmann::json outcome_to_json(const TestOutcome& o) {
    nlohmann::json j = {{"test", o.test_id}, {"status", test_status_name(o.status)}};
    if (!o.message.empty()) j["message"] = o.message;
    if (!o.trace.empty()) j["trace"] = o.trace;
    return j;
}

TestOutcome outcome_from_json(const nlohmann::json& j) {
    TestOutcome o;
    o.test_id = j.at("test").get<std::string>();
    std::string status = j.at("status").get<std::string>();
    auto parsed = test_status_from_name(status);
    if (!parsed) throw ValidationError("unknown test status '" + status + "'");
    o.status = *parsed;
    o.message = j.value("message", "");
    o.trace = j.value("trace", "");
    bool failing = o.status == TestStatus::Fail || o.status == TestStatus::Error;
    if (!failing && (!o.message.empty() || !o.trace.empty())) {
        throw ValidationError("test '" + o.test_id + "' has status " + status +
                              " but carries a failure payload");
    }
    return o;
}

namespace {

nlohmann::json suite_to_json(const SuiteResult& s) {
    TestCounts c = count_outcomes(s.outcomes);
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto& o : s.outcomes) outcomes.push_back(outcome_to_json(o));
    return {{"executed", c.executed},
            {"passed", c.passed},
            {"failed", c.failed},
            {"errors", c.errors},
            {"skipped", c.skipped},
            {"not_collected", c.not_collected},
            {"empty_suite", s.empty_suite},
            {"runner_crashed", s.runner_crashed},
            {"crash_payload", s.crash_payload},
            {"outcomes", outcomes}};
}

SuiteResult suite_from_json(const nlohmann::json& j, const std::string& label) {
    SuiteResult s;
    for (const auto& o : j.at("outcomes")) s.outcomes.push_back(outcome_from_json(o));
    s.empty_suite = j.at("empty_suite").get<bool>();
    s.runner_crashed = j.at("runner_crashed").get<bool>();
    s.crash_payload = j.value("crash_payload", "");

    TestCounts c = count_outcomes(s.outcomes);
    TestCounts stored;
    stored.executed = j.at("executed").get<int>();
    stored.passed = j.at("passed").get<int>();
    stored.failed = j.at("failed").get<int>();
    stored.errors = j.at("errors").get<int>();
    stored.skipped = j.at("skipped").get<int>();
    stored.not_collected = j.at("not_collected").get<int>();
    if (!(stored == c)) {
        throw ValidationError("report: " + label +
                              " counts disagree with the outcome list");
    }
    return s;
}

} // namespace

nlohmann::json report_to_json(const ValidationReport& r) {
    nlohmann::json j = {{"version", r.version},
                        {"snapshot", r.snapshot},
                        {"compile",
                         {{"ok", r.compile_ok},
                          {"exit_code", r.compile_exit_code},
                          {"diagnostics", r.compile_diagnostics}}},
                        {"tests", suite_to_json(r.tests)},
                        {"uncovered_fragments", r.uncovered_fragments},
                        {"all_success", r.all_success}};
    j["generated_tests"] =
        r.generated_tests ? suite_to_json(*r.generated_tests) : nlohmann::json();
    j["coverage"] = r.coverage ? nlohmann::json{{"percent", r.coverage->percent},
                                                {"percent_with_generated",
                                                 r.coverage->percent_with_generated}}
                               : nlohmann::json();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& fc : r.function_checks) {
        checks.push_back({{"fragment", fc.fragment},
                          {"success", fc.success},
                          {"source_payload", fc.source_payload},
                          {"target_payload", fc.target_payload}});
    }
    j["function_checks"] = checks;
    return j;
}

ValidationReport report_from_json(const nlohmann::json& j) {
    ValidationReport r;
    r.version = j.at("version").get<int>();
    if (r.version != 1) {
        throw ValidationError("unsupported report version " + std::to_string(r.version));
    }
    r.snapshot = j.value("snapshot", "");
    const auto& compile = j.at("compile");
    r.compile_ok = compile.at("ok").get<bool>();
    r.compile_exit_code = compile.value("exit_code", 0);
    r.compile_diagnostics = compile.value("diagnostics", std::vector<std::string>{});
    r.tests = suite_from_json(j.at("tests"), "tests");
    if (j.contains("generated_tests") && !j["generated_tests"].is_null()) {
        r.generated_tests = suite_from_json(j["generated_tests"], "generated_tests");
    }
    if (j.contains("coverage") && !j["coverage"].is_null()) {
        CoverageSummary cs;
        cs.percent = j["coverage"].at("percent").get<double>();
        cs.percent_with_generated = j["coverage"].at("percent_with_generated").get<double>();
        r.coverage = cs;
    }
    r.uncovered_fragments =
        j.value("uncovered_fragments", std::vector<std::string>{});
    for (const auto& c : j.value("function_checks", nlohmann::json::array())) {
        FunctionCheck fc;
        fc.fragment = c.at("fragment").get<std::string>();
        fc.success = c.at("success").get<bool>();
        fc.source_payload = c.value("source_payload", "");
        fc.target_payload = c.value("target_payload", "");
        r.function_checks.push_back(std::move(fc));
    }
    r.all_success = j.at("all_success").get<bool>();
    if (r.all_success != compute_all_success(r)) {
        throw ValidationError("report: stored all_success flag disagrees with its parts");
    }
    return r;
}

} // namespace xlate::validation
