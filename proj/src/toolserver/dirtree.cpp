#include "xlate/toolserver/dirtree.hpp"

#include "xlate/util/glob.hpp"
#include "xlate/util/strings.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace xlate::toolserver {

namespace {

bool excluded(const std::string& rel, const std::string& name,
              const std::vector<std::string>& exclude) {
    for (const auto& g : exclude) {
        if (util::glob_match(g, rel) || util::glob_match(g, name)) return true;
    }
    return false;
}

// Case-insensitive name order with byte order as tiebreak, so listings are
// total and stable regardless of locale.
bool name_less(const std::string& a, const std::string& b) {
    std::string la = util::to_lower(a), lb = util::to_lower(b);
    if (la != lb) return la < lb;
    return a < b;
}

DirTreeNode build_node(const fs::path& dir, const std::string& rel_prefix,
                       const std::vector<std::string>& exclude) {
    DirTreeNode node;
    node.name = dir.filename().string();
    if (node.name.empty()) node.name = dir.string(); // e.g. "/" or trailing-slash paths
    node.is_dir = true;

    std::vector<fs::directory_entry> entries;
    for (const auto& e : fs::directory_iterator(dir)) entries.push_back(e);
    std::sort(entries.begin(), entries.end(),
              [](const fs::directory_entry& a, const fs::directory_entry& b) {
                  bool da = a.is_directory(), db = b.is_directory();
                  if (da != db) return da; // directories first
                  return name_less(a.path().filename().string(), b.path().filename().string());
              });

    for (const auto& e : entries) {
        std::string name = e.path().filename().string();
        std::string rel = rel_prefix.empty() ? name : rel_prefix + "/" + name;
        if (excluded(rel, name, exclude)) continue;
        if (e.is_directory()) {
            node.children.push_back(build_node(e.path(), rel, exclude));
        } else if (e.is_regular_file()) {
            node.children.push_back({name, false, {}});
        }
    }
    return node;
}

void render_node(const DirTreeNode& node, int depth, std::string& out) {
    std::string prefix;
    if (depth > 0) {
        prefix = "  ";
        for (int i = 1; i < depth; ++i) prefix += "|  ";
    }
    out += prefix;
    out += "|-- ";
    out += node.name;
    if (node.is_dir) out += "/";
    out += "\n";
    for (const auto& child : node.children) render_node(child, depth + 1, out);
}

} // namespace

DirTreeNode build_directory_tree(const fs::path& root, const std::vector<std::string>& exclude) {
    if (!fs::exists(root) || !fs::is_directory(root)) {
        throw ToolError(ToolError::Kind::NotFound,
                        "get_directory_tree: unreadable root: " + root.string());
    }
    // Use the canonical basename so "." and trailing slashes don't leak
    // into the root node's name.
    fs::path canon = fs::canonical(root);
    DirTreeNode node = build_node(canon, "", exclude);
    node.name = canon.filename().string();
    return node;
}

std::string render_directory_tree(const DirTreeNode& root) {
    std::string out;
    render_node(root, 0, out);
    return out;
}

nlohmann::json dirtree_to_json(const DirTreeNode& node) {
    nlohmann::json j = {{"name", node.name}, {"kind", node.is_dir ? "directory" : "file"}};
    if (node.is_dir) {
        nlohmann::json children = nlohmann::json::array();
        for (const auto& c : node.children) children.push_back(dirtree_to_json(c));
        j["children"] = children;
    }
    return j;
}

} // namespace xlate::toolserver
