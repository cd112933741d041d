#include "xlate/core/discover.hpp"

#include "xlate/util/fs.hpp"
#include "xlate/util/glob.hpp"
#include "xlate/util/strings.hpp"

#include <algorithm>
#include <filesystem>

namespace fs = std::filesystem;

namespace xlate::core {

namespace {

bool has_extension(const std::string& rel, const std::vector<std::string>& exts) {
    for (const auto& ext : exts) {
        if (rel.size() >= ext.size() &&
            rel.compare(rel.size() - ext.size(), ext.size(), ext) == 0) {
            return true;
        }
    }
    return false;
}

// Basename without its final extension.
std::string stem_of(const std::string& rel) {
    auto slash = rel.rfind('/');
    std::string base = slash == std::string::npos ? rel : rel.substr(slash + 1);
    auto dot = base.rfind('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

std::string basename_of(const std::string& rel) {
    auto slash = rel.rfind('/');
    return slash == std::string::npos ? rel : rel.substr(slash + 1);
}

void require_exist(const std::string& root, const std::vector<std::string>& rels,
                   const std::string& what) {
    for (const auto& r : rels) {
        if (!fs::exists(fs::path(root) / r)) {
            throw DiscoverError("discover: listed " + what + " '" + r + "' does not exist under " + root);
        }
    }
}

std::vector<std::string> normalized_sorted(std::vector<std::string> v) {
    for (auto& p : v) p = util::normalize_rel(p);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

bool is_test_path(const std::string& rel_path,
                  const std::vector<std::string>& globs,
                  const std::vector<std::string>& prefixes,
                  const std::vector<std::string>& suffixes) {
    for (const auto& g : globs) {
        if (util::glob_match(g, rel_path)) return true;
    }
    std::string base = basename_of(rel_path);
    for (const auto& p : prefixes) {
        if (!p.empty() && base.rfind(p, 0) == 0) return true;
    }
    std::string stem = stem_of(rel_path);
    for (const auto& s : suffixes) {
        if (!s.empty() && stem.size() >= s.size() &&
            stem.compare(stem.size() - s.size(), s.size(), s) == 0) {
            return true;
        }
    }
    // Files under a test/ or tests/ directory count as tests too.
    for (const auto& seg : util::split(rel_path, '/')) {
        if (seg == "test" || seg == "tests") return true;
    }
    return false;
}

Project discover_project(const std::string& root, const LanguageProfile& profile,
                         const Config& config,
                         const DiscoverOverrides& overrides) {
    if (!fs::exists(root) || !fs::is_directory(root)) {
        throw DiscoverError("discover: root '" + root + "' is not a readable directory");
    }

    Project proj;
    proj.root = fs::absolute(root).lexically_normal().string();
    proj.language = profile.language;

    const auto all = util::list_files(root);

    const auto test_globs = config.effective_test_globs(profile);
    const auto test_prefixes = config.effective_test_prefixes(profile);
    const auto test_suffixes = config.effective_test_suffixes(profile);
    const auto manifest_globs = config.effective_manifest_globs(profile);

    if (overrides.source_files && overrides.test_files) {
        proj.source_files = normalized_sorted(*overrides.source_files);
        proj.test_files = normalized_sorted(*overrides.test_files);
        require_exist(root, proj.source_files, "source file");
        require_exist(root, proj.test_files, "test file");
    } else {
        for (const auto& rel : all) {
            if (!has_extension(rel, profile.file_extensions)) continue;
            if (is_test_path(rel, test_globs, test_prefixes, test_suffixes)) {
                proj.test_files.push_back(rel);
            } else {
                proj.source_files.push_back(rel);
            }
        }
        if (overrides.source_files) {
            proj.source_files = normalized_sorted(*overrides.source_files);
            require_exist(root, proj.source_files, "source file");
        }
        if (overrides.test_files) {
            proj.test_files = normalized_sorted(*overrides.test_files);
            require_exist(root, proj.test_files, "test file");
        }
    }

    if (overrides.dependency_manifests) {
        proj.dependency_manifests = normalized_sorted(*overrides.dependency_manifests);
        require_exist(root, proj.dependency_manifests, "dependency manifest");
    } else {
        for (const auto& rel : all) {
            for (const auto& g : manifest_globs) {
                // Manifests are usually named files (go.mod); match either
                // the full relative path or just the basename.
                if (util::glob_match(g, rel) || util::glob_match(g, basename_of(rel))) {
                    proj.dependency_manifests.push_back(rel);
                    break;
                }
            }
        }
    }

    // A file claimed by both lists stays a test file; enforce disjointness.
    if (!proj.source_files.empty() && !proj.test_files.empty()) {
        std::vector<std::string> cleaned;
        for (const auto& s : proj.source_files) {
            if (!std::binary_search(proj.test_files.begin(), proj.test_files.end(), s)) {
                cleaned.push_back(s);
            }
        }
        proj.source_files = std::move(cleaned);
    }

    if (proj.source_files.empty() && proj.test_files.empty()) {
        throw DiscoverError("discover: no files matching profile '" + profile.language +
                            "' under " + root);
    }
    return proj;
}

} // namespace xlate::core
