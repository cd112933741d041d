// Evaluation machinery: assertion extraction against an AST-walk oracle,
// pairwise test comparison, cosine similarity, trajectory graphs checked
// against a brute-force reimplementation, and metrics report round trips.

#include "xlate/metrics/assertions.hpp"
#include "xlate/metrics/compare.hpp"
#include "xlate/metrics/report.hpp"
#include "xlate/metrics/trajectory_graph.hpp"
#include "xlate/util/fs.hpp"

#include "testenv.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace xlate;
using namespace xlate::metrics;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Literal classification
// ---------------------------------------------------------------------------

TEST_CASE("classify_literal recognizes the four assertion value types") {
    auto s = classify_literal("\"four\"");
    REQUIRE(s.has_value());
    CHECK(s->type == LiteralType::String);
    CHECK(s->string_value == "four");

    auto esc = classify_literal("\"a\\nb\"");
    REQUIRE(esc.has_value());
    CHECK(esc->string_value == "a\nb");

    auto i = classify_literal("-42");
    REQUIRE(i.has_value());
    CHECK(i->type == LiteralType::Int);
    CHECK(i->int_value == -42);

    auto f = classify_literal("2.5");
    REQUIRE(f.has_value());
    CHECK(f->type == LiteralType::Float);
    CHECK(f->float_value == doctest::Approx(2.5));

    auto e = classify_literal("1e3");
    REQUIRE(e.has_value());
    CHECK(e->type == LiteralType::Float);

    auto bt = classify_literal("True");
    REQUIRE(bt.has_value());
    CHECK(bt->type == LiteralType::Bool);
    CHECK(bt->bool_value);
    CHECK(classify_literal("false")->bool_value == false);

    CHECK_FALSE(classify_literal("add(2, 3)").has_value());
    CHECK_FALSE(classify_literal("x").has_value());
    CHECK_FALSE(classify_literal("\"a\" + \"b\"").has_value());
    CHECK_FALSE(classify_literal("").has_value());
}

TEST_CASE("literals_match is typed and tolerant only for floats") {
    auto lit = [](const char* t) { return *classify_literal(t); };
    CHECK(literals_match(lit("\"4\""), lit("'4'")));
    CHECK_FALSE(literals_match(lit("\"4\""), lit("4")));  // string vs int
    CHECK_FALSE(literals_match(lit("4"), lit("4.0")));    // int vs float
    CHECK(literals_match(lit("4"), lit("+4")));
    CHECK(literals_match(lit("True"), lit("true")));

    TypedLiteral a, b;
    a.type = b.type = LiteralType::Float;
    a.float_value = 1.0;
    b.float_value = 1.0 + 1e-10; // inside relative 1e-9
    CHECK(literals_match(a, b));
    b.float_value = 1.001;
    CHECK_FALSE(literals_match(a, b));
}

// ---------------------------------------------------------------------------
// Assertion extraction: Python (oracle-frozen)
// ---------------------------------------------------------------------------

// Expected records frozen from fixtures/scripts/assertion_oracle.py run on
// fixtures/metrics/test_mixed.py (a real-AST independent implementation):
//   line  8 assert_equal  int 5      test_sum
//   line  9 assert_equal  int 0      test_sum
//   line 13 other                    test_contents
//   line 14 assert_false             test_contents
//   line 19 assert_equal  str "2"    CalcCase.test_name
TEST_CASE("python extraction matches the AST-walk oracle on the mixed fixture") {
    std::string text = util::read_file(testenv::fixture("metrics/test_mixed.py").string());
    std::vector<AssertionRecord> recs = extract_assertions(text, "python");
    REQUIRE(recs.size() == 5);

    CHECK(recs[0].line == 8);
    CHECK(recs[0].kind == AssertionKind::AssertEqual);
    CHECK(recs[0].test_id == "test_sum");
    REQUIRE(recs[0].expected_literal.has_value());
    CHECK(recs[0].expected_literal->type == LiteralType::Int);
    CHECK(recs[0].expected_literal->int_value == 5);

    CHECK(recs[1].line == 9);
    CHECK(recs[1].kind == AssertionKind::AssertEqual);
    REQUIRE(recs[1].expected_literal.has_value());
    CHECK(recs[1].expected_literal->int_value == 0);

    CHECK(recs[2].line == 13);
    CHECK(recs[2].kind == AssertionKind::Other);
    CHECK(recs[2].test_id == "test_contents");
    CHECK_FALSE(recs[2].expected_literal.has_value());

    CHECK(recs[3].line == 14);
    CHECK(recs[3].kind == AssertionKind::AssertFalse);

    CHECK(recs[4].line == 19);
    CHECK(recs[4].kind == AssertionKind::AssertEqual);
    CHECK(recs[4].test_id == "CalcCase.test_name");
    REQUIRE(recs[4].expected_literal.has_value());
    CHECK(recs[4].expected_literal->type == LiteralType::String);
    CHECK(recs[4].expected_literal->string_value == "2");
}

TEST_CASE("python extraction details") {
    auto one = [](const std::string& body) {
        std::string text = "def test_it():\n    " + body + "\n";
        auto recs = extract_assertions(text, "python");
        REQUIRE(recs.size() == 1);
        return recs[0];
    };

    SUBCASE("bare expression asserts truth") {
        CHECK(one("assert ok").kind == AssertionKind::AssertTrue);
    }
    SUBCASE("leading not asserts falsity") {
        CHECK(one("assert not broken()").kind == AssertionKind::AssertFalse);
    }
    SUBCASE("inequality and membership are Other") {
        CHECK(one("assert a != b").kind == AssertionKind::Other);
        CHECK(one("assert x in xs").kind == AssertionKind::Other);
        CHECK(one("assert n >= 1").kind == AssertionKind::Other);
    }
    SUBCASE("left-side literal is picked up when the right side is a call") {
        auto r = one("assert \"x\" == f()");
        CHECK(r.kind == AssertionKind::AssertEqual);
        REQUIRE(r.expected_literal.has_value());
        CHECK(r.expected_literal->string_value == "x");
    }
    SUBCASE("the assert message is not part of the compared expression") {
        auto r = one("assert f() == 4.5, \"should be four and a half\"");
        CHECK(r.kind == AssertionKind::AssertEqual);
        REQUIRE(r.expected_literal.has_value());
        CHECK(r.expected_literal->type == LiteralType::Float);
    }
    SUBCASE("operators inside string literals are invisible") {
        auto r = one("assert \"==\" == sep()");
        CHECK(r.kind == AssertionKind::AssertEqual);
        REQUIRE(r.expected_literal.has_value());
        CHECK(r.expected_literal->string_value == "==");
    }
    SUBCASE("comment lines are not assertions") {
        std::string text = "def test_it():\n    # assert x == 1\n    assert y\n";
        CHECK(extract_assertions(text, "python").size() == 1);
    }
    SUBCASE("unittest matchers beyond the big three are Other") {
        CHECK(one("self.assertRaises(TypeError, f)").kind == AssertionKind::Other);
        CHECK(one("self.assertIn(x, xs)").kind == AssertionKind::Other);
        CHECK(one("self.fail(\"nope\")").kind == AssertionKind::Other);
    }
    SUBCASE("attribute access without a call is not an assertion") {
        std::string text = "def test_it():\n    x = recorder.assertions\n";
        CHECK(extract_assertions(text, "python").empty());
    }
    SUBCASE("assertions outside any test function carry an empty test id") {
        std::string text = "assert PRECONDITION\n";
        auto recs = extract_assertions(text, "python");
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].test_id == "");
    }
}

TEST_CASE("unparseable python raises instead of returning zero assertions") {
    CHECK_THROWS_AS(extract_assertions("def test_x(:\n    assert f([1, 2\n", "python"),
                    MetricsError);
}

TEST_CASE("unknown language has no assertion table") {
    CHECK_THROWS_WITH_AS(extract_assertions("assert x", "cobol"), doctest::Contains("cobol"),
                         MetricsError);
}

// ---------------------------------------------------------------------------
// Assertion extraction: Go (hand-derived oracle; no toolchain in sandbox)
// ---------------------------------------------------------------------------

// fixtures/metrics/check_test.go, derived by hand:
//   line 15 assert_equal  (no literal: both sides variables)  TestVerify
//   line 22 assert_equal  str "4"                             TestGenerate
//   line 25 assert_true                                       TestGenerate
//   line 28 assert_false                                      TestGenerate
TEST_CASE("go extraction categorizes guarded t.Error calls by their condition") {
    std::string text = util::read_file(testenv::fixture("metrics/check_test.go").string());
    std::vector<AssertionRecord> recs = extract_assertions(text, "go");
    REQUIRE(recs.size() == 4);

    CHECK(recs[0].line == 15);
    CHECK(recs[0].kind == AssertionKind::AssertEqual);
    CHECK(recs[0].test_id == "TestVerify");
    CHECK_FALSE(recs[0].expected_literal.has_value());

    CHECK(recs[1].line == 22);
    CHECK(recs[1].kind == AssertionKind::AssertEqual);
    CHECK(recs[1].test_id == "TestGenerate");
    REQUIRE(recs[1].expected_literal.has_value());
    CHECK(recs[1].expected_literal->type == LiteralType::String);
    CHECK(recs[1].expected_literal->string_value == "4");

    CHECK(recs[2].line == 25);
    CHECK(recs[2].kind == AssertionKind::AssertTrue);

    CHECK(recs[3].line == 28);
    CHECK(recs[3].kind == AssertionKind::AssertFalse);
}

TEST_CASE("go extraction details") {
    auto one = [](const std::string& body) {
        std::string text = "package p\n\nfunc TestIt(t *testing.T) {\n" + body + "\n}\n";
        auto recs = extract_assertions(text, "go");
        REQUIRE(recs.size() == 1);
        return recs[0];
    };

    SUBCASE("single-line guard") {
        auto r = one("\tif got != 7 { t.Errorf(\"got %d\", got) }");
        CHECK(r.kind == AssertionKind::AssertEqual);
        REQUIRE(r.expected_literal.has_value());
        CHECK(r.expected_literal->int_value == 7);
    }
    SUBCASE("equality guard is an inequality assertion, hence Other") {
        CHECK(one("\tif got == old { t.Error(\"should differ\") }").kind ==
              AssertionKind::Other);
    }
    SUBCASE("comparison guard is Other") {
        CHECK(one("\tif n > 3 { t.Errorf(\"too many\") }").kind == AssertionKind::Other);
    }
    SUBCASE("testify helpers") {
        CHECK(one("\tassert.Equal(t, 4, got)").kind == AssertionKind::AssertEqual);
        CHECK(*one("\tassert.Equal(t, 4, got)").expected_literal ==
              *classify_literal("4"));
        CHECK(one("\trequire.True(t, ok)").kind == AssertionKind::AssertTrue);
        CHECK(one("\tassert.False(t, bad)").kind == AssertionKind::AssertFalse);
        CHECK(one("\trequire.NoError(t, err)").kind == AssertionKind::Other);
    }
    SUBCASE("unguarded t.Fatal is progress reporting, not an assertion") {
        std::string text =
            "package p\n\nfunc TestIt(t *testing.T) {\n\tt.Fatal(\"setup broke\")\n}\n";
        CHECK(extract_assertions(text, "go").empty());
    }
    SUBCASE("one guard with two report calls is one assertion") {
        std::string text = "package p\n\nfunc TestIt(t *testing.T) {\n"
                           "\tif got != want {\n"
                           "\t\tt.Errorf(\"a\")\n"
                           "\t\tt.Errorf(\"b\")\n"
                           "\t}\n}\n";
        CHECK(extract_assertions(text, "go").size() == 1);
    }
    SUBCASE("unbalanced braces raise") {
        CHECK_THROWS_AS(extract_assertions("package p\nfunc TestIt(t *testing.T) {\n", "go"),
                        MetricsError);
    }
}

// ---------------------------------------------------------------------------
// Cross-language kind mismatch (the java/python example pair)
// ---------------------------------------------------------------------------

TEST_CASE("assertFalse and its looser translation land in different kinds") {
    std::string java_test = "public class ListTest {\n"
                            "    @Test\n"
                            "    public void testEmptiness() {\n"
                            "        assertFalse(list.isEmpty());\n"
                            "    }\n"
                            "}\n";
    std::string py_test = "def test_emptiness():\n    assert len(list) > 0\n";

    auto java_recs = extract_assertions(java_test, "java");
    REQUIRE(java_recs.size() == 1);
    CHECK(java_recs[0].kind == AssertionKind::AssertFalse);
    CHECK(java_recs[0].test_id == "testEmptiness");

    auto py_recs = extract_assertions(py_test, "python");
    REQUIRE(py_recs.size() == 1);
    CHECK(py_recs[0].kind == AssertionKind::Other);

    // The pair counts as a type-match miss on both kinds involved.
    TestFileAnalysis src{java_recs, 6, 2};
    TestFileAnalysis tgt{py_recs, 2, 1};
    TestPairMetrics m = compare_test_pair(src, tgt, {1, 0}, {1, 0});
    CHECK(m.count_match); // one assertion each
    CHECK(m.type_match_percent["assert_false"] == 0.0);
    CHECK(m.type_match_percent["other"] == 0.0);
    CHECK(m.type_match_percent["assert_equal"] == 100.0); // absent on both sides
}

// ---------------------------------------------------------------------------
// File-level counters
// ---------------------------------------------------------------------------

TEST_CASE("analyze_test_file counts lines and call expressions") {
    std::string text = util::read_file(testenv::fixture("metrics/test_mixed.py").string());
    TestFileAnalysis a = analyze_test_file(text, "python");
    CHECK(a.assertions.size() == 5);
    // 12 non-blank lines (the docstring counts; nothing is a # comment).
    CHECK(a.loc == 12);
    // add, add, len+items, flag, assertEqual+add — assertion calls included.
    CHECK(a.method_invocations == 7);

    std::string go_text = util::read_file(testenv::fixture("metrics/check_test.go").string());
    TestFileAnalysis g = analyze_test_file(go_text, "go");
    CHECK(g.assertions.size() == 4);
    CHECK(g.loc == 27);
    // Verify, Errorf, Generate, Errorf, IsWellFormed, Fatal, BadFlag, Error.
    CHECK(g.method_invocations == 8);
}

// ---------------------------------------------------------------------------
// Cosine similarity
// ---------------------------------------------------------------------------

TEST_CASE("cosine matches hand-computed values") {
    CHECK(cosine({1, 0, 0}, {1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine({1, 0, 0}, {0, 1, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine({2, 3}, {-2, -3}) == doctest::Approx(-1.0).epsilon(1e-12));
    // (1,2,2)·(2,1,2) = 8, both norms 3, so 8/9.
    CHECK(cosine({1, 2, 2}, {2, 1, 2}) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("cosine rejects mismatched and degenerate inputs") {
    CHECK_THROWS_WITH_AS(cosine({1, 2}, {1, 2, 3}), doctest::Contains("dimension"),
                         MetricsError);
    CHECK_THROWS_WITH_AS(cosine({0, 0, 0}, {1, 2, 3}), doctest::Contains("zero"),
                         MetricsError);
    CHECK_THROWS_AS(cosine({}, {}), MetricsError);
}

TEST_CASE("cosine is symmetric, scale-invariant, and bounded") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        size_t dim = 1 + rng() % 8;
        std::vector<double> a(dim), b(dim);
        for (auto& v : a) v = dist(rng);
        for (auto& v : b) v = dist(rng);
        auto nonzero = [](const std::vector<double>& v) {
            for (double x : v)
                if (x != 0.0) return true;
            return false;
        };
        if (!nonzero(a) || !nonzero(b)) continue;

        double c = cosine(a, b);
        CHECK(std::fabs(c) <= 1.0);
        CHECK(cosine(b, a) == doctest::Approx(c).epsilon(1e-12));

        double k = 0.25 + (rng() % 100) / 10.0;
        std::vector<double> ka = a;
        for (auto& v : ka) v *= k;
        CHECK(cosine(ka, b) == doctest::Approx(c).epsilon(1e-9));
    }
}

// ---------------------------------------------------------------------------
// Pairwise comparison
// ---------------------------------------------------------------------------

namespace {

AssertionRecord eq_record(const char* literal_token) {
    AssertionRecord r;
    r.kind = AssertionKind::AssertEqual;
    if (literal_token) r.expected_literal = classify_literal(literal_token);
    return r;
}

} // namespace

TEST_CASE("a verbatim translation scores full marks") {
    TestFileAnalysis side;
    side.assertions = {eq_record("\"4\""), eq_record("10")};
    side.assertions.push_back({});
    side.assertions.back().kind = AssertionKind::AssertTrue;
    side.loc = 20;
    side.method_invocations = 6;

    TestPairMetrics m = compare_test_pair(side, side, {1, 2, 2}, {1, 2, 2});
    CHECK(m.count_match);
    CHECK(m.equal_output_total == 2);
    CHECK(m.equal_output_matching == 2);
    for (const auto& [kind, pct] : m.type_match_percent) {
        CAPTURE(kind);
        CHECK(pct == 100.0);
    }
    CHECK(m.cosine_similarity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thirty-six matching equality outputs render as 36/0") {
    TestFileAnalysis src, tgt;
    for (int i = 0; i < 36; ++i) {
        std::string tok = std::to_string(i);
        src.assertions.push_back(eq_record(tok.c_str()));
        tgt.assertions.push_back(eq_record(tok.c_str()));
    }
    TestPairMetrics m = compare_test_pair(src, tgt, {1, 1}, {1, 1});
    CHECK(m.equal_output_total == 36);
    CHECK(m.equal_output_matching == 36);

    MetricsReport r;
    r.test_pairs.push_back({"checkdigit", m});
    std::string table = render_table(r);
    CHECK(table.find("36/0") != std::string::npos);
}

TEST_CASE("equal-output matching is a typed multiset overlap") {
    TestFileAnalysis src, tgt;
    SUBCASE("duplicates consume one partner each") {
        src.assertions = {eq_record("4"), eq_record("4")};
        tgt.assertions = {eq_record("4")};
        TestPairMetrics m = compare_test_pair(src, tgt, {1}, {1});
        CHECK(m.equal_output_total == 2);
        CHECK(m.equal_output_matching == 1);
        CHECK(m.equal_output_matching <= m.equal_output_total);
    }
    SUBCASE("types never cross-match") {
        src.assertions = {eq_record("4")};
        tgt.assertions = {eq_record("\"4\"")};
        TestPairMetrics m = compare_test_pair(src, tgt, {1}, {1});
        CHECK(m.equal_output_matching == 0);
    }
    SUBCASE("strings match after escape decoding across languages") {
        src.assertions = {eq_record("\"a\\tb\"")};
        tgt.assertions = {eq_record("'a\\tb'")};
        TestPairMetrics m = compare_test_pair(src, tgt, {1}, {1});
        CHECK(m.equal_output_matching == 1);
    }
    SUBCASE("floats match within relative 1e-9") {
        src.assertions = {eq_record("2.0")};
        AssertionRecord near;
        near.kind = AssertionKind::AssertEqual;
        TypedLiteral l;
        l.type = LiteralType::Float;
        l.float_value = 2.0 + 1e-10;
        near.expected_literal = l;
        tgt.assertions = {near};
        TestPairMetrics m = compare_test_pair(src, tgt, {1}, {1});
        CHECK(m.equal_output_matching == 1);
    }
    SUBCASE("records without extractable literals do not enter the pool") {
        src.assertions = {eq_record("4"), eq_record(nullptr)};
        tgt.assertions = {eq_record("4")};
        TestPairMetrics m = compare_test_pair(src, tgt, {1}, {1});
        CHECK(m.equal_output_total == 1);
        CHECK(m.equal_output_matching == 1);
    }
}

TEST_CASE("type match percentages are min/max per kind") {
    TestFileAnalysis src, tgt;
    src.assertions = {eq_record("1"), eq_record("2")};         // 2 equal
    tgt.assertions = {eq_record("1")};                         // 1 equal
    AssertionRecord t_true;
    t_true.kind = AssertionKind::AssertTrue;
    tgt.assertions.push_back(t_true);                          // 1 true

    TestPairMetrics m = compare_test_pair(src, tgt, {1, 0}, {0, 1});
    CHECK(m.type_match_percent["assert_equal"] == 50.0);
    CHECK(m.type_match_percent["assert_true"] == 0.0);
    CHECK(m.type_match_percent["assert_false"] == 100.0); // absent both sides
    CHECK_FALSE(m.count_match);
    for (const auto& [kind, pct] : m.type_match_percent) {
        CAPTURE(kind);
        CHECK(pct >= 0.0);
        CHECK(pct <= 100.0);
    }
}

TEST_CASE("count match is symmetric and reflexive") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        TestFileAnalysis a, b;
        for (size_t i = rng() % 5; i > 0; --i) a.assertions.push_back(eq_record("1"));
        for (size_t i = rng() % 5; i > 0; --i) b.assertions.push_back(eq_record("1"));
        TestPairMetrics ab = compare_test_pair(a, b, {1}, {1});
        TestPairMetrics ba = compare_test_pair(b, a, {1}, {1});
        TestPairMetrics aa = compare_test_pair(a, a, {1}, {1});
        CHECK(ab.count_match == ba.count_match);
        CHECK(aa.count_match);
    }
}

// ---------------------------------------------------------------------------
// Embedding file
// ---------------------------------------------------------------------------

TEST_CASE("embedding files parse to id-keyed vectors") {
    std::string text = "# produced upstream\n"
                       "tests/test_a.py::test_one 3 1.0 0.0 0.5\n"
                       "\n"
                       "tests/test_a.py::test_two 2 -0.25 4\n";
    auto vecs = parse_embeddings(text);
    REQUIRE(vecs.size() == 2);
    CHECK(vecs.at("tests/test_a.py::test_one") == std::vector<double>{1.0, 0.0, 0.5});
    CHECK(vecs.at("tests/test_a.py::test_two") == std::vector<double>{-0.25, 4.0});
}

TEST_CASE("embedding files reject structural mistakes") {
    CHECK_THROWS_WITH_AS(parse_embeddings("t1 3 1.0 2.0\n"), doctest::Contains("declared 3"),
                         MetricsError);
    CHECK_THROWS_WITH_AS(parse_embeddings("t1 2 1.0 2.0\nt1 2 3.0 4.0\n"),
                         doctest::Contains("duplicate"), MetricsError);
    CHECK_THROWS_WITH_AS(parse_embeddings("t1 two 1.0 2.0\n"),
                         doctest::Contains("dimension"), MetricsError);
    CHECK_THROWS_WITH_AS(parse_embeddings("t1 1 abc\n"), doctest::Contains("bad value"),
                         MetricsError);
    CHECK_THROWS_AS(parse_embeddings("loner\n"), MetricsError);
}

// ---------------------------------------------------------------------------
// Trajectory graphs
// ---------------------------------------------------------------------------

namespace {

struct SyntheticEvent {
    bool is_phase = false;
    TrajNode node;
};

SyntheticEvent phase() { return {true, {}}; }

SyntheticEvent tool(const std::string& name, const std::string& file = "") {
    SyntheticEvent e;
    e.node = {"tool", name, file};
    return e;
}

SyntheticEvent turn(const std::string& agent) {
    SyntheticEvent e;
    e.node = {"turn", agent, ""};
    return e;
}

llm::Trajectory make_trajectory(const std::vector<SyntheticEvent>& evs) {
    llm::Trajectory t;
    t.header.run_id = "synthetic";
    long seq = 1;
    for (const auto& ev : evs) {
        llm::TrajectoryEvent e;
        e.seq = seq++;
        if (ev.is_phase) {
            e.kind = "phase";
            e.data = {{"name", "step"}};
        } else if (ev.node.kind == "turn") {
            e.kind = "turn";
            e.data = {{"agent", ev.node.actor}};
        } else {
            e.kind = "tool";
            e.data = {{"tool", ev.node.actor}};
            if (!ev.node.file.empty()) e.data["args"] = {{"file", ev.node.file}};
        }
        t.events.push_back(std::move(e));
    }
    return t;
}

// Independent reimplementation of the five metrics: quadratic scans over
// the raw event list instead of incremental bookkeeping.
TrajectoryMetrics brute_force_metrics(const std::vector<SyntheticEvent>& evs) {
    std::vector<TrajNode> walk;
    std::vector<int> session_of;
    int session = 0;
    for (const auto& ev : evs) {
        if (ev.is_phase) {
            ++session;
            continue;
        }
        walk.push_back(ev.node);
        session_of.push_back(session);
    }

    TrajectoryMetrics m;
    std::set<TrajNode> uniq(walk.begin(), walk.end());
    m.nc = static_cast<long>(uniq.size());

    for (size_t i = 1; i < walk.size(); ++i) {
        if (session_of[i] == session_of[i - 1]) ++m.tec;
    }

    for (auto a = uniq.begin(); a != uniq.end(); ++a) {
        for (auto b = std::next(a); b != uniq.end(); ++b) {
            if (!a->file.empty() && a->file == b->file) ++m.sec;
        }
    }

    double length_sum = 0.0;
    for (size_t j = 0; j < walk.size(); ++j) {
        for (size_t i = j; i-- > 0;) {
            if (walk[i] == walk[j]) {
                ++m.lc;
                length_sum += static_cast<double>(j - i);
                break;
            }
        }
    }
    m.all = m.lc ? length_sum / static_cast<double>(m.lc) : 0.0;
    return m;
}

} // namespace

TEST_CASE("five distinct tool calls form a loop-free chain") {
    auto t = make_trajectory({tool("definition", "a.go"), tool("hover", "b.go"),
                              tool("references", "c.go"), tool("rename_symbol", "d.go"),
                              tool("diagnostics", "e.go")});
    TrajectoryMetrics m = trajectory_metrics(build_trajectory_graph(t));
    CHECK(m.nc == 5);
    CHECK(m.tec == 4);
    CHECK(m.lc == 0);
    CHECK(m.all == 0.0);
}

TEST_CASE("an a-b-a revisit is one loop of length two") {
    auto t = make_trajectory(
        {tool("definition", "a.go"), tool("hover", "b.go"), tool("definition", "a.go")});
    TrajectoryGraph g = build_trajectory_graph(t);
    TrajectoryMetrics m = trajectory_metrics(g);
    CHECK(m.nc == 2);
    CHECK(m.tec == 2);
    CHECK(m.lc == 1);
    CHECK(m.all == doctest::Approx(2.0));
    REQUIRE(g.loops.size() == 1);
    CHECK(g.loops[0].node.actor == "definition");
    CHECK(g.loops[0].length == 2);
    // Different files, so no structural edge under this abstraction.
    CHECK(m.sec == 0);
}

TEST_CASE("two tools touching the same file create a structural edge") {
    auto t = make_trajectory({tool("definition", "m.go"), tool("edit_file", "m.go")});
    TrajectoryMetrics m = trajectory_metrics(build_trajectory_graph(t));
    CHECK(m.sec == 1);
    CHECK(m.nc == 2);
}

TEST_CASE("events with no file never share a structural edge") {
    auto t = make_trajectory({turn("analyzer"), turn("translator"), tool("shell")});
    TrajectoryMetrics m = trajectory_metrics(build_trajectory_graph(t));
    CHECK(m.sec == 0);
    CHECK(m.nc == 3);
}

TEST_CASE("phase markers split sessions for temporal edges only") {
    auto t = make_trajectory({tool("a", "f"), tool("b", "f"), phase(), tool("a", "f"),
                              tool("c", "f")});
    TrajectoryGraph g = build_trajectory_graph(t);
    REQUIRE(g.sessions.size() == 2);
    CHECK(g.sessions[0].size() == 2);
    CHECK(g.sessions[1].size() == 2);

    TrajectoryMetrics m = trajectory_metrics(g);
    CHECK(m.tec == 2); // 1 + 1, the cross-marker pair is not an edge
    // The a-node revisit still counts: loops follow the walk, not sessions.
    CHECK(m.lc == 1);
    CHECK(m.all == doctest::Approx(2.0));
}

TEST_CASE("an empty log yields all-zero metrics") {
    auto t = make_trajectory({});
    TrajectoryMetrics m = trajectory_metrics(build_trajectory_graph(t));
    CHECK(m.nc == 0);
    CHECK(m.tec == 0);
    CHECK(m.sec == 0);
    CHECK(m.lc == 0);
    CHECK(m.all == 0.0);
}

TEST_CASE("the walk stops at the terminal event and skips unknown kinds") {
    auto t = make_trajectory({tool("a", "f1"), tool("b", "f2")});
    llm::TrajectoryEvent end;
    end.seq = 3;
    end.kind = "end";
    end.data = {{"status", "success"}};
    t.events.push_back(end);
    llm::TrajectoryEvent stray;
    stray.seq = 4;
    stray.kind = "tool";
    stray.data = {{"tool", "never_counted"}};
    t.events.push_back(stray);

    TrajectoryMetrics m = trajectory_metrics(build_trajectory_graph(t));
    CHECK(m.nc == 2);
    CHECK(m.tec == 1);
}

TEST_CASE("primary file argument falls back from args.file to args.path") {
    llm::Trajectory t;
    llm::TrajectoryEvent e1;
    e1.seq = 1;
    e1.kind = "tool";
    e1.data = {{"tool", "read_file"}, {"args", {{"path", "x.py"}}}};
    llm::TrajectoryEvent e2;
    e2.seq = 2;
    e2.kind = "tool";
    e2.data = {{"tool", "hover"}, {"args", {{"file", "x.py"}, {"line", 3}}}};
    t.events = {e1, e2};

    TrajectoryGraph g = build_trajectory_graph(t);
    REQUIRE(g.nodes.size() == 2);
    CHECK(g.nodes[0].file == "x.py");
    CHECK(g.nodes[1].file == "x.py");
    CHECK(trajectory_metrics(g).sec == 1);
}

TEST_CASE("graph metrics equal the brute-force oracle on random logs") {
    std::mt19937 rng(20260815);
    const std::string tools[] = {"definition", "hover", "edit_file"};
    const std::string files[] = {"", "a.go", "b.go", "c.py"};
    const std::string agents[] = {"analyzer", "translator"};

    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SyntheticEvent> evs;
        size_t n = rng() % 51;
        for (size_t i = 0; i < n; ++i) {
            unsigned roll = rng() % 100;
            if (roll < 15) {
                evs.push_back(phase());
            } else if (roll < 75) {
                evs.push_back(tool(tools[rng() % 3], files[rng() % 4]));
            } else {
                evs.push_back(turn(agents[rng() % 2]));
            }
        }
        TrajectoryMetrics got = trajectory_metrics(build_trajectory_graph(make_trajectory(evs)));
        TrajectoryMetrics want = brute_force_metrics(evs);
        CAPTURE(trial);
        CHECK(got.nc == want.nc);
        CHECK(got.tec == want.tec);
        CHECK(got.sec == want.sec);
        CHECK(got.lc == want.lc);
        CHECK(got.all == doctest::Approx(want.all).epsilon(1e-12));

        // Cross-cutting invariants.
        long events = 0;
        for (const auto& ev : evs)
            if (!ev.is_phase) ++events;
        CHECK(got.nc <= events);
        long session_sum = 0;
        for (const auto& s : build_trajectory_graph(make_trajectory(evs)).sessions) {
            session_sum += static_cast<long>(s.size()) - 1;
        }
        CHECK(got.tec == session_sum);
    }
}

TEST_CASE("a textual trajectory log feeds the graph end to end") {
    std::string log =
        R"({"type":"header","version":1,"run_id":"r1","source_language":"go","target_language":"python","config_hash":"h","created_unix_ms":0})"
        "\n"
        R"({"type":"event","seq":1,"kind":"phase","name":"analyze"})" "\n"
        R"({"type":"event","seq":2,"kind":"turn","agent":"analyzer","wall_seconds":0.5})" "\n"
        R"({"type":"event","seq":3,"kind":"tool","tool":"get_file_structure","args":{"file":"m.go"}})" "\n"
        R"({"type":"event","seq":4,"kind":"tool","tool":"definition","args":{"file":"m.go","line":3}})" "\n"
        R"({"type":"event","seq":5,"kind":"end","status":"success"})" "\n";
    llm::Trajectory t = llm::parse_trajectory(log);
    TrajectoryMetrics m = trajectory_metrics(build_trajectory_graph(t));
    CHECK(m.nc == 3);
    CHECK(m.tec == 2);
    CHECK(m.sec == 1); // both tools touch m.go
    CHECK(m.lc == 0);
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

namespace {

MetricsReport sample_metrics_report() {
    MetricsReport r;
    RunRow row;
    row.project = "checkdigit";
    row.compile_success = true;
    row.tests_executed = 36;
    row.tests_passed = 36;
    row.tests_failed = 0;
    row.coverage_percent = 70.8;
    row.coverage_percent_with_generated = 85.4;
    r.runs.push_back(row);

    TestFileAnalysis side;
    side.assertions = {eq_record("\"4\"")};
    side.loc = 9;
    side.method_invocations = 3;
    r.test_pairs.push_back({"check_test", compare_test_pair(side, side, {1, 2}, {1, 2})});

    TrajectoryMetrics tm;
    tm.nc = 12;
    tm.tec = 18;
    tm.sec = 4;
    tm.lc = 3;
    tm.all = 2.5;
    r.trajectory = tm;

    r.cost = json{{"total", {{"input_tokens", 1200LL}, {"output_tokens", 340LL}}},
                  {"dollars", 0.0123}};
    return r;
}

} // namespace

TEST_CASE("metrics records round-trip exactly") {
    MetricsReport r = sample_metrics_report();
    std::string records = render_records(r);
    MetricsReport back = parse_records(records);
    CHECK(back == r);
    // And the rendering itself is deterministic.
    CHECK(render_records(back) == records);
}

TEST_CASE("metrics records carry their version and counting basis up front") {
    std::string records = render_records(MetricsReport{});
    auto first = json::parse(records.substr(0, records.find('\n')));
    CHECK(first.at("type") == "metrics_header");
    CHECK(first.at("version") == 1);
    CHECK(first.at("abstraction") == "abstraction v1");
    CHECK(first.at("equal_output_basis") == "per-assertion");
}

TEST_CASE("metrics records parser rejects bad input") {
    SUBCASE("missing header") {
        CHECK_THROWS_WITH_AS(parse_records(R"({"type":"run"})"),
                             doctest::Contains("metrics_header"), MetricsError);
    }
    SUBCASE("wrong version") {
        CHECK_THROWS_WITH_AS(parse_records(R"({"type":"metrics_header","version":9})"),
                             doctest::Contains("version"), MetricsError);
    }
    SUBCASE("unknown record type") {
        std::string text = render_records(MetricsReport{}) + R"({"type":"surprise"})" "\n";
        CHECK_THROWS_WITH_AS(parse_records(text), doctest::Contains("surprise"), MetricsError);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(parse_records(""), MetricsError);
    }
}

TEST_CASE("the table names the classic run columns") {
    std::string table = render_table(sample_metrics_report());
    for (const char* needle : {"CS", "TE", "TP", "TF", "C+", "checkdigit", "70.8", "85.4",
                               "NC=12", "TEC=18", "ALL=2.5", "$0.012300"}) {
        CAPTURE(needle);
        CHECK(table.find(needle) != std::string::npos);
    }
}

TEST_CASE("an empty report renders as a bare header") {
    std::string table = render_table(MetricsReport{});
    CHECK(table == "metrics report v1 | abstraction v1 | equal-output basis: per-assertion\n");
}

TEST_CASE("run rows derive from validation reports") {
    validation::ValidationReport vr;
    vr.compile_ok = true;
    validation::TestOutcome pass;
    pass.test_id = "t1";
    pass.status = validation::TestStatus::Pass;
    validation::TestOutcome fail;
    fail.test_id = "t2";
    fail.status = validation::TestStatus::Fail;
    fail.message = "boom";
    vr.tests.outcomes = {pass, fail};
    validation::CoverageSummary cs;
    cs.percent = 50.0;
    cs.percent_with_generated = 75.0;
    vr.coverage = cs;

    RunRow row = run_row_from_report("demo", vr);
    CHECK(row.project == "demo");
    CHECK(row.compile_success);
    CHECK(row.tests_executed == 2);
    CHECK(row.tests_passed == 1);
    CHECK(row.tests_failed == 1);
    REQUIRE(row.coverage_percent.has_value());
    CHECK(*row.coverage_percent == 50.0);
    CHECK(*row.coverage_percent_with_generated == 75.0);

    SUBCASE("absent coverage stays absent") {
        vr.coverage.reset();
        RunRow bare = run_row_from_report("demo", vr);
        CHECK_FALSE(bare.coverage_percent.has_value());
    }
}
