#pragma once

// Shared helpers for locating the repository, fixtures, and built tools
// from inside test binaries, plus scratch-directory management.

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace testenv {

inline std::filesystem::path repo_root() {
    if (const char* env = std::getenv("XLATE_REPO_ROOT")) return env;
    // Fall back to walking up from the cwd until we find the fixtures dir.
    auto p = std::filesystem::current_path();
    while (!p.empty()) {
        if (std::filesystem::exists(p / "fixtures")) return p;
        if (p == p.parent_path()) break;
        p = p.parent_path();
    }
    return std::filesystem::current_path();
}

inline std::filesystem::path build_dir() {
    if (const char* env = std::getenv("XLATE_BUILD_DIR")) return env;
    return std::filesystem::current_path();
}

inline std::filesystem::path fixture(const std::string& name) {
    return repo_root() / "fixtures" / name;
}

// A fresh scratch directory under the build tree; caller owns cleanup
// (but stale ones are harmless — the build dir is disposable).
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    auto dir = build_dir() / "scratch" / (tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testenv
