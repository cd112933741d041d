#include "doctest.h"

#include "xlate/toolserver/structure.hpp"
#include "xlate/util/fs.hpp"

#include "testenv.hpp"

#include <nlohmann/json.hpp>

using namespace xlate;
using namespace xlate::toolserver;

namespace {

SkeletonRecord scan_fixture(const std::string& rel_fixture, const std::string& language,
                            const std::string& record_path) {
    std::string text = util::read_file(testenv::fixture(rel_fixture));
    return get_file_structure(record_path, language, text);
}

nlohmann::json golden(const std::string& name) {
    return nlohmann::json::parse(util::read_file(testenv::fixture("golden/" + name)));
}

const SkeletonEntry* find(const std::vector<SkeletonEntry>& entries, const std::string& name) {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

void check_entry(const std::vector<SkeletonEntry>& entries, const std::string& name,
                 const std::string& kind, int start, int end) {
    CAPTURE(name);
    const SkeletonEntry* e = find(entries, name);
    REQUIRE(e != nullptr);
    CHECK(e->kind == kind);
    CHECK(e->start_line == start);
    CHECK(e->end_line == end);
}

} // namespace

TEST_CASE("python scan matches the ast-derived record for BasicParser") {
    SkeletonRecord rec = scan_fixture("py_figure_tree/python/src/main/BasicParser.py", "python",
                                      "src/main/BasicParser.py");
    CHECK(rec.parse_ok);
    CHECK(skeleton_to_json(rec) == golden("structure_BasicParser.json"));
}

TEST_CASE("python scan matches the ast-derived record for BasicParserTest") {
    SkeletonRecord rec = scan_fixture("py_figure_tree/python/src/test/BasicParserTest.py",
                                      "python", "src/test/BasicParserTest.py");
    CHECK(skeleton_to_json(rec) == golden("structure_BasicParserTest.json"));
}

TEST_CASE("python scan matches the ast-derived record for OptionComp") {
    SkeletonRecord rec = scan_fixture("optioncomp/OptionComp.py", "python", "OptionComp.py");
    CHECK(skeleton_to_json(rec) == golden("structure_OptionComp.json"));
}

TEST_CASE("go scan extracts checkdigit.go declarations") {
    SkeletonRecord rec = scan_fixture("go_checkdigit/checkdigit.go", "go", "checkdigit.go");
    REQUIRE(rec.parse_ok);
    REQUIRE(rec.imports.size() == 1);
    check_entry(rec.imports, "errors", "import", 4, 4);
    REQUIRE(rec.globals.size() == 1);
    check_entry(rec.globals, "ErrInvalidArgument", "global", 7, 7);
    REQUIRE(rec.classes.size() == 1);
    check_entry(rec.classes, "Provider", "interface", 10, 13);
    REQUIRE(rec.structs.size() == 1);
    check_entry(rec.structs, "luhn", "struct", 28, 28);
    REQUIRE(rec.functions.size() == 4);
    check_entry(rec.functions, "isNumber", "function", 16, 26);
    check_entry(rec.functions, "NewLuhn", "function", 31, 31);
    check_entry(rec.functions, "luhn.Verify", "method", 33, 50);
    check_entry(rec.functions, "luhn.Generate", "method", 52, 69);
}

TEST_CASE("go scan extracts damm.go declarations") {
    SkeletonRecord rec = scan_fixture("go_checkdigit/damm.go", "go", "damm.go");
    REQUIRE(rec.parse_ok);
    CHECK(rec.imports.empty());
    REQUIRE(rec.globals.size() == 1);
    check_entry(rec.globals, "dammMatrix", "global", 5, 16);
    REQUIRE(rec.structs.size() == 1);
    check_entry(rec.structs, "damm", "struct", 18, 18);
    REQUIRE(rec.functions.size() == 3);
    check_entry(rec.functions, "NewDamm", "function", 21, 21);
    check_entry(rec.functions, "damm.Verify", "method", 23, 32);
    check_entry(rec.functions, "damm.Generate", "method", 34, 43);
}

TEST_CASE("go scan handles test files") {
    SkeletonRecord rec = scan_fixture("go_checkdigit/cd_test.go", "go", "cd_test.go");
    REQUIRE(rec.parse_ok);
    check_entry(rec.imports, "testing", "import", 3, 3);
    REQUIRE(rec.functions.size() == 2);
    check_entry(rec.functions, "TestLuhnVerify", "function", 5, 13);
    check_entry(rec.functions, "TestLuhnGenerate", "function", 15, 21);
}

TEST_CASE("comments and strings never produce declarations") {
    std::string go_text = "package p\n\n// func notReal() {}\nvar s = \"func alsoFake() {}\"\n";
    SkeletonRecord rec = get_file_structure("p.go", "go", go_text);
    CHECK(rec.functions.empty());
    REQUIRE(rec.globals.size() == 1);
    CHECK(rec.globals[0].name == "s");

    std::string py_text = "# def not_real():\ntext = \"def also_fake():\"\n";
    SkeletonRecord pyrec = get_file_structure("p.py", "python", py_text);
    CHECK(pyrec.functions.empty());
    REQUIRE(pyrec.globals.size() == 1);
    CHECK(pyrec.globals[0].name == "text");
}

TEST_CASE("broken input degrades to parse_ok false instead of throwing") {
    SkeletonRecord go_rec = get_file_structure("broken.go", "go", "package p\nfunc f() {\n");
    CHECK_FALSE(go_rec.parse_ok);
    CHECK_FALSE(go_rec.parse_message.empty());

    SkeletonRecord py_rec =
        get_file_structure("broken.py", "python", "text = \"\"\"unterminated\n");
    CHECK_FALSE(py_rec.parse_ok);
    CHECK_FALSE(py_rec.parse_message.empty());
}

TEST_CASE("unsupported languages report capability_unavailable") {
    try {
        get_file_structure("main.rs", "rust", "fn main() {}\n");
        FAIL("expected a ToolError");
    } catch (const ToolError& e) {
        CHECK(e.kind == ToolError::Kind::CapabilityUnavailable);
    }
}

TEST_CASE("skeleton fragments cover declarations but not imports") {
    SkeletonRecord rec = scan_fixture("go_checkdigit/checkdigit.go", "go", "checkdigit.go");
    auto frags = skeleton_fragments(rec);
    CHECK(frags.size() ==
          rec.classes.size() + rec.functions.size() + rec.globals.size() + rec.structs.size());
    for (const auto& f : frags) {
        CHECK(f.file == "checkdigit.go");
        auto parsed = core::parse_fragment_identity(core::fragment_identity(f));
        REQUIRE(parsed.has_value());
        CHECK(parsed->first == f.file);
        CHECK(parsed->second == f.qualified_name);
    }
}
