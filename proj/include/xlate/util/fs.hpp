#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace xlate::util {

/// Normalizes a repository-relative path: forward slashes, no leading "./",
/// "." and ".." segments resolved lexically.
std::string normalize_rel(std::string_view path);

std::string read_file(const std::filesystem::path& path);

/// Write-temp-then-rename. The destination is either fully replaced or
/// untouched; parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

void write_file(const std::filesystem::path& path, std::string_view content);

/// All regular files under root as sorted normalized relative paths.
std::vector<std::string> list_files(const std::filesystem::path& root);

/// Recursive copy of a directory tree (regular files only).
void copy_tree(const std::filesystem::path& from, const std::filesystem::path& to);

/// Relative path -> content hash for every regular file under root.
std::map<std::string, std::string> snapshot_tree(const std::filesystem::path& root);

} // namespace xlate::util
