#pragma once

#include "xlate/core/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xlate::metrics {

struct MetricsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// How a test constrains its subject. Anything that is not a recognizable
// equality/truth assertion lands in Other — inequality checks, membership
// checks, raise/panic expectations, and framework matchers.
enum class AssertionKind { AssertEqual, AssertTrue, AssertFalse, Other };

const char* assertion_kind_name(AssertionKind k);
std::optional<AssertionKind> assertion_kind_from_name(const std::string& name);

// The expected value of an equality assertion, when it is spelled as a
// literal in the test source. Typed so that 4, 4.0, and "4" stay distinct.
enum class LiteralType { String, Int, Float, Bool };

struct TypedLiteral {
    LiteralType type = LiteralType::String;
    std::string string_value; // escape sequences decoded
    long long int_value = 0;
    double float_value = 0.0;
    bool bool_value = false;

    bool operator==(const TypedLiteral&) const = default;
};

// Literal equivalence used for output matching: strings compare after
// escape decoding, ints and bools exactly, floats within relative 1e-9.
// Literals of different types never match.
bool literals_match(const TypedLiteral& a, const TypedLiteral& b);

// Classifies one source token as a typed literal. Handles quoted strings
// (single, double; escape decoding), integer and float spellings, and the
// language-neutral booleans (True/False/true/false). Returns nullopt for
// anything else — identifiers, calls, composites.
std::optional<TypedLiteral> classify_literal(const std::string& token);

struct AssertionRecord {
    std::string test_id; // enclosing test function; "" outside any test
    AssertionKind kind = AssertionKind::Other;
    std::optional<TypedLiteral> expected_literal;
    int line = 1;

    bool operator==(const AssertionRecord&) const = default;
};

// Scans a test file for assertions using the language's pattern table.
//
//   python: `assert` statements (== is equal; leading `not` is false; other
//           comparisons are Other; bare expressions are true) and unittest
//           method calls (assertEqual/assertTrue/assertFalse; other
//           assert*/fail/pytest.raises are Other).
//   go:     `if <cond> { t.Error*/t.Fatal* }` guards, categorized by the
//           condition the test enforces (`a != b` guards an equality
//           assertion, `!x` a truth assertion, a bare expression a
//           falsity assertion, everything else Other), plus
//           assert.*/require.* helper calls. Unguarded t.Error*/t.Fatal*
//           is progress reporting, not an assertion.
//   java:   unqualified or Assert-qualified assertEquals/assertTrue/
//           assertFalse calls; other assert*/fail calls are Other. Kind
//           table only — provided so cross-language pairs involving Java
//           tests can be categorized.
//
// A file the language scanner cannot parse raises MetricsError; a zero
// count is only ever returned for a genuinely assertion-free file.
std::vector<AssertionRecord> extract_assertions(const std::string& text,
                                                const core::LanguageId& language);

// Whole-file counters that accompany the assertion records in a pairwise
// comparison.
struct TestFileAnalysis {
    std::vector<AssertionRecord> assertions;
    int loc = 0;                // non-blank lines, pure comment lines excluded
    int method_invocations = 0; // call expressions, assertion calls included

    bool operator==(const TestFileAnalysis&) const = default;
};

TestFileAnalysis analyze_test_file(const std::string& text, const core::LanguageId& language);

} // namespace xlate::metrics
