#include "doctest.h"

#include "xlate/toolserver/dirtree.hpp"
#include "xlate/util/fs.hpp"
#include "xlate/util/strings.hpp"

#include "testenv.hpp"

#include <nlohmann/json.hpp>

using namespace xlate;
using namespace xlate::toolserver;

TEST_CASE("python project tree renders in the documented pipe format") {
    DirTreeNode tree = build_directory_tree(testenv::fixture("py_figure_tree/python"));
    std::string rendered = render_directory_tree(tree);
    std::string golden = util::read_file(testenv::fixture("golden/py_figure_tree.txt"));
    CHECK(util::trim(rendered) == util::trim(golden));
}

TEST_CASE("tree JSON mirrors the hierarchy") {
    DirTreeNode tree = build_directory_tree(testenv::fixture("py_figure_tree/python"));
    nlohmann::json j = dirtree_to_json(tree);
    CHECK(j["name"] == "python");
    CHECK(j["kind"] == "directory");
    REQUIRE(j["children"].size() == 4); // src/, conftest.py, pytest.ini, run.sh
    CHECK(j["children"][0]["name"] == "src");
    CHECK(j["children"][0]["kind"] == "directory");
    CHECK(j["children"][1]["name"] == "conftest.py");
    CHECK(j["children"][1]["kind"] == "file");
    CHECK(j["children"][1].contains("children") == false);
}

TEST_CASE("directories come first, names sort case-insensitively") {
    auto dir = testenv::scratch_dir("dirtree");
    util::write_file(dir / "B.txt", "");
    util::write_file(dir / "a.txt", "");
    util::write_file(dir / "zeta" / "inner.txt", "");
    util::write_file(dir / "Alpha" / "inner.txt", "");

    DirTreeNode tree = build_directory_tree(dir);
    std::vector<std::string> names;
    for (const auto& child : tree.children) names.push_back(child.name);
    CHECK(names == std::vector<std::string>{"Alpha", "zeta", "a.txt", "B.txt"});
}

TEST_CASE("underscore names sort ahead of letters only under case folding") {
    // '_' (0x5F) sits between the upper- and lowercase letter ranges, so a
    // case-sensitive byte sort would put "B..." ahead of "__init__.py".
    auto dir = testenv::scratch_dir("dirtree");
    util::write_file(dir / "__init__.py", "");
    util::write_file(dir / "BasicParser.py", "");
    DirTreeNode tree = build_directory_tree(dir);
    REQUIRE(tree.children.size() == 2);
    CHECK(tree.children[0].name == "__init__.py");
    CHECK(tree.children[1].name == "BasicParser.py");
}

TEST_CASE("exclusion globs match entry names and relative paths") {
    auto root = testenv::fixture("py_figure_tree/python");

    DirTreeNode no_ini = build_directory_tree(root, {"*.ini", "run.sh"});
    std::vector<std::string> names;
    for (const auto& child : no_ini.children) names.push_back(child.name);
    CHECK(names == std::vector<std::string>{"src", "conftest.py"});

    DirTreeNode no_tests = build_directory_tree(root, {"src/test"});
    REQUIRE(no_tests.children[0].name == "src");
    REQUIRE(no_tests.children[0].children.size() == 1);
    CHECK(no_tests.children[0].children[0].name == "main");
}

TEST_CASE("missing root reports not_found") {
    try {
        build_directory_tree(testenv::fixture("does_not_exist"));
        FAIL("expected a ToolError");
    } catch (const ToolError& e) {
        CHECK(e.kind == ToolError::Kind::NotFound);
    }
}
