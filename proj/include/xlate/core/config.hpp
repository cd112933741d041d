#pragma once

#include "xlate/core/types.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace xlate::core {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Global test/manifest conventions applied to every language unless the
// profile overrides them.
struct TestConventions {
    std::vector<std::string> test_globs;
    std::vector<std::string> test_prefixes;
    std::vector<std::string> test_suffixes;
    std::vector<std::string> manifest_globs;
};

struct Config {
    std::map<LanguageId, LanguageProfile> languages;
    RateTable rates;
    RunBudget budget;
    TestConventions test_conventions;

    const LanguageProfile& profile(const LanguageId& id) const;
    bool has_language(const LanguageId& id) const { return languages.count(id) > 0; }

    // Effective (profile-overridden or global) detection rules.
    std::vector<std::string> effective_test_globs(const LanguageProfile& p) const;
    std::vector<std::string> effective_test_prefixes(const LanguageProfile& p) const;
    std::vector<std::string> effective_test_suffixes(const LanguageProfile& p) const;
    std::vector<std::string> effective_manifest_globs(const LanguageProfile& p) const;
};

// Strict parse: top-level keys must be exactly a subset of
// {languages, rates, budget, test_conventions}; unknown keys (at the top
// level and inside each section) are rejected with a ConfigError naming
// the offender. Throws ConfigError on any structural problem.
Config parse_config(const nlohmann::json& j);
Config load_config_file(const std::string& path);

// A built-in config with go/python profiles suitable for this repository's
// fixtures. Used when no --config is given.
Config default_config();

// Stable hash over the semantic content of the config (key-sorted JSON),
// recorded in trajectory logs so replays can detect drift.
std::string config_hash(const Config& c);

nlohmann::json config_to_json(const Config& c);

// Substitute {root}/{file}/{filter} placeholders in one command template.
// `root` is substituted as an absolute path. Unknown placeholders throw.
std::vector<std::string> expand_command(const std::vector<std::string>& tmpl,
                                        const std::string& root,
                                        const std::string& file = "",
                                        const std::string& filter = "");

} // namespace xlate::core
