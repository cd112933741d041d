#pragma once

#include "xlate/toolserver/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace xlate::toolserver {

// Snapshot of the directory hierarchy under root. Children are ordered
// directories-first, then case-insensitively by name (byte order breaks
// ties), which is also the rendering order. `exclude` globs are matched
// against both the root-relative path and the bare entry name.
DirTreeNode build_directory_tree(const std::filesystem::path& root,
                                 const std::vector<std::string>& exclude = {});

// Pipe/indent text form:
//   |-- root/
//     |-- subdir/
//     |  |-- file.txt
//     |-- other.txt
// Two-space indent per level; nested levels carry a "|  " rail per
// ancestor below the root; directories get a trailing slash.
std::string render_directory_tree(const DirTreeNode& root);

nlohmann::json dirtree_to_json(const DirTreeNode& node);

} // namespace xlate::toolserver
