#pragma once

#include "xlate/core/config.hpp"
#include "xlate/core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xlate::core {

struct DiscoverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Optional explicit path lists that bypass convention-based detection.
// Paths are root-relative; anything listed must exist.
struct DiscoverOverrides {
    std::optional<std::vector<std::string>> source_files;
    std::optional<std::vector<std::string>> test_files;
    std::optional<std::vector<std::string>> dependency_manifests;
};

// Walk `root`, partition files with the profile's extensions into source
// vs test (by the effective globs/prefixes/suffixes), and collect
// dependency manifests. All lists come back sorted so repeated discovery
// of the same tree yields identical Projects.
//
// Throws DiscoverError when root is missing or when no file matches the
// profile (an empty project is never returned silently).
Project discover_project(const std::string& root, const LanguageProfile& profile,
                         const Config& config,
                         const DiscoverOverrides& overrides = {});

// True when `rel_path` looks like a test file under the given rules.
bool is_test_path(const std::string& rel_path,
                  const std::vector<std::string>& globs,
                  const std::vector<std::string>& prefixes,
                  const std::vector<std::string>& suffixes);

} // namespace xlate::core
