#include "xlate/validation/coverage.hpp"

#include "xlate/util/strings.hpp"

#include <algorithm>
#include <sstream>

namespace xlate::validation {

namespace {

// Parses "3 5-8 12" into a line set. Numbers are 1-based; ranges inclusive.
std::set<int> parse_line_set(const std::string& text, size_t lineno) {
    std::set<int> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        size_t dash = token.find('-');
        long a = 0, b = 0;
        try {
            if (dash == std::string::npos) {
                a = b = std::stol(token);
            } else {
                a = std::stol(token.substr(0, dash));
                b = std::stol(token.substr(dash + 1));
            }
        } catch (const std::exception&) {
            throw ValidationError("coverage line " + std::to_string(lineno) +
                                  ": bad line range '" + token + "'");
        }
        if (a < 1 || b < a) {
            throw ValidationError("coverage line " + std::to_string(lineno) +
                                  ": bad line range '" + token + "'");
        }
        for (long n = a; n <= b; ++n) out.insert(static_cast<int>(n));
    }
    return out;
}

std::string render_line_set(const std::set<int>& lines) {
    std::string out;
    auto it = lines.begin();
    while (it != lines.end()) {
        int start = *it;
        int end = start;
        ++it;
        while (it != lines.end() && *it == end + 1) {
            end = *it;
            ++it;
        }
        if (!out.empty()) out += ' ';
        out += std::to_string(start);
        if (end > start) out += '-' + std::to_string(end);
    }
    return out;
}

} // namespace

CoverageData parse_coverage(const std::string& text) {
    CoverageData cov;
    std::string current; // path of the open `file` section
    bool saw_executable = false;
    bool saw_covered = false;
    bool saw_header = false;

    size_t lineno = 0;
    for (const auto& raw : util::split_lines(text)) {
        ++lineno;
        std::string line = util::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "coverage v1") {
                throw ValidationError("coverage line " + std::to_string(lineno) +
                                      ": expected 'coverage v1' header, got '" + line + "'");
            }
            saw_header = true;
            continue;
        }

        size_t space = line.find(' ');
        std::string directive = space == std::string::npos ? line : line.substr(0, space);
        std::string rest = space == std::string::npos ? "" : util::trim(line.substr(space + 1));

        if (directive == "file") {
            if (rest.empty()) {
                throw ValidationError("coverage line " + std::to_string(lineno) +
                                      ": file directive without a path");
            }
            if (cov.files.count(rest)) {
                throw ValidationError("coverage line " + std::to_string(lineno) +
                                      ": duplicate file '" + rest + "'");
            }
            cov.files[rest] = {};
            current = rest;
            saw_executable = saw_covered = false;
        } else if (directive == "executable" || directive == "covered") {
            if (current.empty()) {
                throw ValidationError("coverage line " + std::to_string(lineno) + ": '" +
                                      directive + "' before any file directive");
            }
            bool& seen = directive == "executable" ? saw_executable : saw_covered;
            if (seen) {
                throw ValidationError("coverage line " + std::to_string(lineno) +
                                      ": repeated '" + directive + "' for file '" + current +
                                      "'");
            }
            seen = true;
            std::set<int> lines = parse_line_set(rest, lineno);
            if (directive == "executable") {
                cov.files[current].executable = std::move(lines);
            } else {
                cov.files[current].covered = std::move(lines);
            }
        } else {
            throw ValidationError("coverage line " + std::to_string(lineno) +
                                  ": unknown directive '" + directive + "'");
        }
    }
    if (!saw_header) throw ValidationError("coverage data is empty (missing header)");

    for (const auto& [path, fc] : cov.files) {
        for (int n : fc.covered) {
            if (!fc.executable.count(n)) {
                throw ValidationError("coverage for '" + path + "' marks line " +
                                      std::to_string(n) + " covered but not executable");
            }
        }
    }
    return cov;
}

std::string coverage_to_text(const CoverageData& cov) {
    std::string out = "coverage v1\n";
    for (const auto& [path, fc] : cov.files) {
        out += "file " + path + "\n";
        if (!fc.executable.empty()) out += "executable " + render_line_set(fc.executable) + "\n";
        if (!fc.covered.empty()) out += "covered " + render_line_set(fc.covered) + "\n";
    }
    return out;
}

CoverageData merge_coverage(const CoverageData& a, const CoverageData& b) {
    CoverageData out = a;
    for (const auto& [path, fc] : b.files) {
        FileCoverage& dst = out.files[path];
        dst.executable.insert(fc.executable.begin(), fc.executable.end());
        dst.covered.insert(fc.covered.begin(), fc.covered.end());
    }
    return out;
}

double coverage_percent(const CoverageData& cov) {
    size_t executable = 0, covered = 0;
    for (const auto& [_, fc] : cov.files) {
        executable += fc.executable.size();
        covered += fc.covered.size();
    }
    if (executable == 0) return 100.0;
    return 100.0 * static_cast<double>(covered) / static_cast<double>(executable);
}

bool span_covered(const CoverageData& cov, const std::string& file, int start_line,
                  int end_line) {
    auto it = cov.files.find(file);
    if (it == cov.files.end()) return false;
    auto lo = it->second.covered.lower_bound(start_line);
    return lo != it->second.covered.end() && *lo <= end_line;
}

std::vector<std::string> coverage_gap(const std::vector<core::Fragment>& fragments,
                                      const CoverageData& cov,
                                      const std::vector<std::string>& known_files) {
    std::set<std::string> known(known_files.begin(), known_files.end());
    for (const auto& f : fragments) known.insert(f.file);
    std::vector<std::string> unknown;
    for (const auto& [path, _] : cov.files) {
        if (!known.count(path)) unknown.push_back(path);
    }
    if (!unknown.empty()) {
        std::string msg = "coverage references paths outside the project tree:";
        for (const auto& p : unknown) msg += " " + p;
        throw ValidationError(msg);
    }

    std::vector<std::string> uncovered;
    for (const auto& f : fragments) {
        if (!span_covered(cov, f.file, f.start_line, f.end_line)) {
            uncovered.push_back(core::fragment_identity(f));
        }
    }
    return uncovered;
}

} // namespace xlate::validation
