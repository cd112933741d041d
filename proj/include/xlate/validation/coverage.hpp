#pragma once

#include "xlate/core/types.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace xlate::validation {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-file line coverage in the normalized interchange format. Language
// tooling differs wildly in what it reports, so every coverage_command is
// expected to reduce its native output to this: which lines carry
// executable statements, and which of those ran.
struct FileCoverage {
    std::set<int> executable; // 1-based line numbers holding statements
    std::set<int> covered;    // subset of executable that was executed

    bool operator==(const FileCoverage&) const = default;
};

struct CoverageData {
    // Keyed by root-relative path; map order keeps serialization stable.
    std::map<std::string, FileCoverage> files;

    bool operator==(const CoverageData&) const = default;
};

// Text form, version 1:
//
//   coverage v1
//   file <root-relative path>
//   executable 3 5-8 12
//   covered 3 5-6
//
// One `file` line per file, each optionally followed by one `executable`
// and one `covered` line (absent means empty). Line sets are spelled as
// space-separated numbers or inclusive ranges. `#` starts a comment line.
CoverageData parse_coverage(const std::string& text);
std::string coverage_to_text(const CoverageData& cov);

// Union of both line sets, per file. Used to fold generated-test coverage
// into the developer-test baseline.
CoverageData merge_coverage(const CoverageData& a, const CoverageData& b);

// Covered executable lines / total executable lines, as a percentage.
// A tree with no executable lines counts as fully covered.
double coverage_percent(const CoverageData& cov);

// True when at least one covered line falls inside [start_line, end_line]
// of `file`. (Covered lines are executable by invariant, so this is the
// "fragment exercised" test.)
bool span_covered(const CoverageData& cov, const std::string& file, int start_line,
                  int end_line);

// Identities of manifest fragments whose span contains no covered line, in
// manifest order. Coverage entries for paths outside `known_files` indicate
// the data belongs to a different tree: error listing the offenders.
std::vector<std::string> coverage_gap(const std::vector<core::Fragment>& fragments,
                                      const CoverageData& cov,
                                      const std::vector<std::string>& known_files);

} // namespace xlate::validation
