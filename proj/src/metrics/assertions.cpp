#include "xlate/metrics/assertions.hpp"

#include "xlate/toolserver/structure.hpp"
#include "xlate/toolserver/types.hpp"
#include "xlate/util/strings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace xlate::metrics {

const char* assertion_kind_name(AssertionKind k) {
    switch (k) {
    case AssertionKind::AssertEqual: return "assert_equal";
    case AssertionKind::AssertTrue: return "assert_true";
    case AssertionKind::AssertFalse: return "assert_false";
    case AssertionKind::Other: return "other";
    }
    return "other";
}

std::optional<AssertionKind> assertion_kind_from_name(const std::string& name) {
    if (name == "assert_equal") return AssertionKind::AssertEqual;
    if (name == "assert_true") return AssertionKind::AssertTrue;
    if (name == "assert_false") return AssertionKind::AssertFalse;
    if (name == "other") return AssertionKind::Other;
    return std::nullopt;
}

bool literals_match(const TypedLiteral& a, const TypedLiteral& b) {
    if (a.type != b.type) return false;
    switch (a.type) {
    case LiteralType::String: return a.string_value == b.string_value;
    case LiteralType::Int: return a.int_value == b.int_value;
    case LiteralType::Bool: return a.bool_value == b.bool_value;
    case LiteralType::Float: {
        double x = a.float_value, y = b.float_value;
        if (x == y) return true;
        return std::fabs(x - y) <= 1e-9 * std::max(std::fabs(x), std::fabs(y));
    }
    }
    return false;
}

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string decode_escapes(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out += s[i];
            continue;
        }
        char c = s[++i];
        switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '0': out += '\0'; break;
        case '\\': out += '\\'; break;
        case '\'': out += '\''; break;
        case '"': out += '"'; break;
        case '`': out += '`'; break;
        default: out += c; break; // unknown escape: keep the character
        }
    }
    return out;
}

// Replaces the contents of string literals with spaces so token scans and
// bracket counting cannot be fooled by quotes. Quote characters themselves
// survive, keeping column positions stable.
std::string blank_strings(const std::string& line, const std::string& quote_chars) {
    std::string out = line;
    char open = 0;
    for (size_t i = 0; i < out.size(); ++i) {
        char c = out[i];
        if (open) {
            if (c == '\\' && i + 1 < out.size()) {
                out[i] = ' ';
                out[++i] = ' ';
            } else if (c == open) {
                open = 0;
            } else {
                out[i] = ' ';
            }
        } else if (quote_chars.find(c) != std::string::npos) {
            open = c;
        }
    }
    return out;
}

// Cuts a trailing line comment. `blanked` must be the blank_strings view of
// `line` so markers inside string literals are ignored.
std::string strip_comment(const std::string& line, const std::string& blanked,
                          const std::string& marker) {
    size_t pos = blanked.find(marker);
    if (pos == std::string::npos) return line;
    return line.substr(0, pos);
}

// Position of `op` at bracket depth 0 in a string-blanked expression, or
// npos. Comparison operators are matched exactly: "==" must not be part of
// "!=", "<=", ">=", or a three-character operator.
size_t find_top_level(const std::string& blanked, const std::string& op) {
    int depth = 0;
    for (size_t i = 0; i + op.size() <= blanked.size(); ++i) {
        char c = blanked[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (depth != 0) continue;
        if (blanked.compare(i, op.size(), op) != 0) continue;
        char before = i > 0 ? blanked[i - 1] : ' ';
        char after = i + op.size() < blanked.size() ? blanked[i + op.size()] : ' ';
        if (op == "==" && (before == '!' || before == '<' || before == '>' || before == '=' ||
                           after == '='))
            continue;
        if ((op == "<" || op == ">") && (after == '=' || after == op[0] || before == op[0]))
            continue; // <=, >=, <<, >> are not plain comparisons
        return i;
    }
    return std::string::npos;
}

// Splits a blanked argument list on top-level commas, returning substring
// ranges into the original text.
std::vector<std::pair<size_t, size_t>> split_args(const std::string& blanked, size_t begin,
                                                  size_t end) {
    std::vector<std::pair<size_t, size_t>> parts;
    if (begin >= end) return parts;
    int depth = 0;
    size_t start = begin;
    for (size_t i = begin; i < end; ++i) {
        char c = blanked[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back({start, i});
            start = i + 1;
        }
    }
    parts.push_back({start, end});
    return parts;
}

} // namespace

std::optional<TypedLiteral> classify_literal(const std::string& token) {
    std::string t = util::trim(token);
    if (t.empty()) return std::nullopt;

    if (t == "True" || t == "true") {
        TypedLiteral l;
        l.type = LiteralType::Bool;
        l.bool_value = true;
        return l;
    }
    if (t == "False" || t == "false") {
        TypedLiteral l;
        l.type = LiteralType::Bool;
        l.bool_value = false;
        return l;
    }
    if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) {
        // Reject "a" + "b": the closing quote must terminate the token.
        std::string inner = t.substr(1, t.size() - 2);
        std::string blanked = blank_strings(t, std::string(1, t.front()));
        if (blanked.find(t.front(), 1) != t.size() - 1) return std::nullopt;
        TypedLiteral l;
        l.type = LiteralType::String;
        l.string_value = decode_escapes(inner);
        return l;
    }

    std::string digits = t;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits = digits.substr(1);
    if (digits.empty()) return std::nullopt;
    bool all_digits = std::all_of(digits.begin(), digits.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
    });
    if (all_digits) {
        TypedLiteral l;
        l.type = LiteralType::Int;
        l.int_value = std::strtoll(t.c_str(), nullptr, 10);
        return l;
    }
    bool numberish = std::all_of(digits.begin(), digits.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
               c == '+' || c == '-';
    });
    if (numberish && digits.find_first_of("0123456789") != std::string::npos &&
        digits.find_first_of(".eE") != std::string::npos) {
        char* endp = nullptr;
        double v = std::strtod(t.c_str(), &endp);
        if (endp && *endp == '\0') {
            TypedLiteral l;
            l.type = LiteralType::Float;
            l.float_value = v;
            return l;
        }
    }
    return std::nullopt;
}

namespace {

// ------------------------- enclosing-test lookup ---------------------------

struct TestSpan {
    std::string id;
    int start = 1;
    int end = 1;
};

std::string leaf_name(const std::string& qualified) {
    size_t dot = qualified.rfind('.');
    return dot == std::string::npos ? qualified : qualified.substr(dot + 1);
}

bool looks_like_test_name(const std::string& leaf, const core::LanguageId& language) {
    if (language == "go") return leaf.rfind("Test", 0) == 0;
    return leaf.rfind("test", 0) == 0;
}

// Narrowest enclosing test function, so methods win over their class span.
std::string test_id_at(const std::vector<TestSpan>& spans, int line) {
    const TestSpan* best = nullptr;
    for (const auto& s : spans) {
        if (line < s.start || line > s.end) continue;
        if (!best || (s.end - s.start) < (best->end - best->start)) best = &s;
    }
    return best ? best->id : "";
}

std::vector<TestSpan> test_spans_from_structure(const std::string& text,
                                                const core::LanguageId& language) {
    toolserver::SkeletonRecord rec =
        toolserver::get_file_structure("tests." + language, language, text);
    if (!rec.parse_ok) {
        throw MetricsError("cannot extract assertions: " + language +
                           " parse failed: " + rec.parse_message);
    }
    std::vector<TestSpan> spans;
    for (const auto& fn : rec.functions) {
        if (!looks_like_test_name(leaf_name(fn.name), language)) continue;
        spans.push_back({fn.name, fn.start_line, fn.end_line});
    }
    return spans;
}

// ------------------------------ python -------------------------------------

AssertionKind categorize_python_expr(const std::string& expr_blanked) {
    std::string t = util::trim(expr_blanked);
    if (t.rfind("not ", 0) == 0) return AssertionKind::AssertFalse;
    if (find_top_level(t, "==") != std::string::npos) {
        // `a == b if c else d` and similar stay equality at heart; good enough.
        return AssertionKind::AssertEqual;
    }
    for (const char* op : {"!=", "<=", ">=", "<", ">"}) {
        if (find_top_level(t, op) != std::string::npos) return AssertionKind::Other;
    }
    for (const char* word : {" in ", " is ", " not in "}) {
        if (t.find(word) != std::string::npos) return AssertionKind::Other;
    }
    return AssertionKind::AssertTrue;
}

// Picks the literal operand of an `a == b` comparison: the right side when
// it is a literal, else the left, else nothing.
std::optional<TypedLiteral> equality_literal(const std::string& original,
                                             const std::string& blanked) {
    size_t pos = find_top_level(blanked, "==");
    if (pos == std::string::npos) return std::nullopt;
    std::string left = util::trim(original.substr(0, pos));
    std::string right = util::trim(original.substr(pos + 2));
    if (auto r = classify_literal(right)) return r;
    return classify_literal(left);
}

// First literal among a call's arguments (expected-first conventions put
// it there; reversed call sites still yield the same literal multiset).
std::optional<TypedLiteral> first_literal_arg(const std::string& original,
                                              const std::string& blanked, size_t open_paren) {
    int depth = 0;
    size_t close = std::string::npos;
    for (size_t i = open_paren; i < blanked.size(); ++i) {
        if (blanked[i] == '(') ++depth;
        if (blanked[i] == ')' && --depth == 0) {
            close = i;
            break;
        }
    }
    if (close == std::string::npos) return std::nullopt;
    for (auto [b, e] : split_args(blanked, open_paren + 1, close)) {
        if (auto lit = classify_literal(original.substr(b, e - b))) return lit;
    }
    return std::nullopt;
}

// Position right after a method-call pattern like ".assertEqual" and before
// its "("; npos when the line does not call it.
size_t method_call_pos(const std::string& blanked, const std::string& name) {
    size_t pos = blanked.find(name + "(");
    if (pos == std::string::npos) return std::string::npos;
    if (pos > 0 && is_ident_char(blanked[pos - 1])) return std::string::npos;
    return pos + name.size();
}

// True when the line calls some method whose name starts with `prefix`
// (e.g. ".assert" matches .assertIn(...) but not an .assertions attribute).
bool calls_method_with_prefix(const std::string& blanked, const std::string& prefix) {
    size_t pos = blanked.find(prefix);
    while (pos != std::string::npos) {
        size_t end = pos + prefix.size();
        while (end < blanked.size() && is_ident_char(blanked[end])) ++end;
        if (end < blanked.size() && blanked[end] == '(') return true;
        pos = blanked.find(prefix, pos + 1);
    }
    return false;
}

std::vector<AssertionRecord> extract_python(const std::string& text) {
    std::vector<TestSpan> spans = test_spans_from_structure(text, "python");
    std::vector<AssertionRecord> out;

    int lineno = 0;
    for (const auto& raw : util::split_lines(text)) {
        ++lineno;
        std::string blanked_full = blank_strings(raw, "\"'");
        std::string line = strip_comment(raw, blanked_full, "#");
        std::string blanked = blank_strings(line, "\"'");
        std::string trimmed = util::trim(blanked);
        if (trimmed.empty()) continue;

        AssertionRecord rec;
        rec.line = lineno;
        rec.test_id = test_id_at(spans, lineno);

        std::string orig_trimmed = util::trim(line);

        if (trimmed.rfind("assert ", 0) == 0 || trimmed == "assert") {
            std::string expr_b = trimmed.size() > 7 ? trimmed.substr(7) : "";
            std::string expr_o = orig_trimmed.size() > 7 ? orig_trimmed.substr(7) : "";
            // An `assert expr, message` statement: the message is not part
            // of the asserted expression.
            int depth = 0;
            size_t cut = std::string::npos;
            for (size_t i = 0; i < expr_b.size(); ++i) {
                char c = expr_b[i];
                if (c == '(' || c == '[' || c == '{') ++depth;
                if (c == ')' || c == ']' || c == '}') --depth;
                if (c == ',' && depth == 0) {
                    cut = i;
                    break;
                }
            }
            if (cut != std::string::npos) {
                expr_b = expr_b.substr(0, cut);
                expr_o = expr_o.substr(0, cut);
            }
            rec.kind = categorize_python_expr(expr_b);
            if (rec.kind == AssertionKind::AssertEqual) {
                rec.expected_literal = equality_literal(expr_o, expr_b);
            }
            out.push_back(std::move(rec));
            continue;
        }

        if (size_t p = method_call_pos(blanked, ".assertEqual"); p != std::string::npos) {
            rec.kind = AssertionKind::AssertEqual;
            rec.expected_literal = first_literal_arg(line, blanked, p);
            out.push_back(std::move(rec));
        } else if (method_call_pos(blanked, ".assertTrue") != std::string::npos) {
            rec.kind = AssertionKind::AssertTrue;
            out.push_back(std::move(rec));
        } else if (method_call_pos(blanked, ".assertFalse") != std::string::npos) {
            rec.kind = AssertionKind::AssertFalse;
            out.push_back(std::move(rec));
        } else if (calls_method_with_prefix(blanked, ".assert") ||
                   method_call_pos(blanked, ".fail") != std::string::npos ||
                   method_call_pos(blanked, "pytest.raises") != std::string::npos) {
            rec.kind = AssertionKind::Other;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

// -------------------------------- go ----------------------------------------

bool line_reports_failure(const std::string& blanked) {
    for (const char* call : {"t.Errorf(", "t.Error(", "t.Fatalf(", "t.Fatal(", "t.Fail("}) {
        size_t pos = blanked.find(call);
        if (pos != std::string::npos && (pos == 0 || !is_ident_char(blanked[pos - 1]))) {
            return true;
        }
    }
    return false;
}

AssertionKind categorize_go_condition(const std::string& cond_blanked) {
    std::string t = util::trim(cond_blanked);
    if (find_top_level(t, "!=") != std::string::npos) return AssertionKind::AssertEqual;
    if (t.rfind("!", 0) == 0) return AssertionKind::AssertTrue;
    if (find_top_level(t, "==") != std::string::npos) return AssertionKind::Other;
    for (const char* op : {"<=", ">=", "<", ">"}) {
        if (find_top_level(t, op) != std::string::npos) return AssertionKind::Other;
    }
    // A bare boolean guard fails the test when it is true, so the test
    // asserts it is false.
    return AssertionKind::AssertFalse;
}

std::optional<TypedLiteral> go_inequality_literal(const std::string& original,
                                                  const std::string& blanked) {
    size_t pos = find_top_level(blanked, "!=");
    if (pos == std::string::npos) return std::nullopt;
    std::string left = util::trim(original.substr(0, pos));
    std::string right = util::trim(original.substr(pos + 2));
    if (auto r = classify_literal(right)) return r;
    return classify_literal(left);
}

struct GoIfFrame {
    int depth_inside = 0; // brace depth while inside this if body
    std::string cond_original;
    std::string cond_blanked;
    bool recorded = false;
};

std::vector<AssertionRecord> extract_go(const std::string& text) {
    std::vector<TestSpan> spans = test_spans_from_structure(text, "go");
    std::vector<AssertionRecord> out;

    std::vector<GoIfFrame> if_stack;
    int depth = 0;

    int lineno = 0;
    for (const auto& raw : util::split_lines(text)) {
        ++lineno;
        std::string blanked_full = blank_strings(raw, "\"'`");
        std::string line = strip_comment(raw, blanked_full, "//");
        std::string blanked = blank_strings(line, "\"'`");
        std::string trimmed = util::trim(blanked);
        std::string orig_trimmed = util::trim(line);
        if (trimmed.empty()) continue;

        AssertionRecord rec;
        rec.line = lineno;
        rec.test_id = test_id_at(spans, lineno);

        // Helper-library assertions are call-shaped and self-contained.
        bool helper_handled = false;
        for (const char* prefix : {"assert.", "require."}) {
            size_t pos = blanked.find(prefix);
            if (pos == std::string::npos) continue;
            if (pos > 0 && is_ident_char(blanked[pos - 1])) continue;
            size_t name_start = pos + std::string(prefix).size();
            size_t name_end = name_start;
            while (name_end < blanked.size() && is_ident_char(blanked[name_end])) ++name_end;
            if (name_end >= blanked.size() || blanked[name_end] != '(') continue;
            std::string name = blanked.substr(name_start, name_end - name_start);
            if (name == "Equal" || name == "Equalf" || name == "EqualValues") {
                rec.kind = AssertionKind::AssertEqual;
                // Skip the *testing.T first argument when hunting literals.
                rec.expected_literal = first_literal_arg(line, blanked, name_end);
            } else if (name == "True" || name == "Truef") {
                rec.kind = AssertionKind::AssertTrue;
            } else if (name == "False" || name == "Falsef") {
                rec.kind = AssertionKind::AssertFalse;
            } else {
                rec.kind = AssertionKind::Other;
            }
            out.push_back(rec);
            helper_handled = true;
            break;
        }

        // Track `if <cond> {` guards so t.Error*/t.Fatal* inside them is
        // attributed to the condition the test enforces.
        bool is_if = trimmed.rfind("if ", 0) == 0;
        std::string cond_b, cond_o;
        if (is_if) {
            size_t open = blanked.rfind('{');
            size_t start = blanked.find("if ") + 3;
            size_t end = open == std::string::npos ? blanked.size() : open;
            cond_b = blanked.substr(start, end - start);
            cond_o = line.substr(start, end - start);
            // `if got := f(); got != want` — the condition follows the last
            // top-level semicolon of the if header.
            int d = 0;
            size_t semi = std::string::npos;
            for (size_t i = 0; i < cond_b.size(); ++i) {
                char c = cond_b[i];
                if (c == '(' || c == '[' || c == '{') ++d;
                if (c == ')' || c == ']' || c == '}') --d;
                if (c == ';' && d == 0) semi = i;
            }
            if (semi != std::string::npos) {
                cond_b = cond_b.substr(semi + 1);
                cond_o = cond_o.substr(semi + 1);
            }
        }

        // A single-line guard: `if cond { t.Errorf(...) }`.
        if (is_if && !helper_handled && line_reports_failure(blanked)) {
            rec.kind = categorize_go_condition(cond_b);
            if (rec.kind == AssertionKind::AssertEqual) {
                rec.expected_literal = go_inequality_literal(util::trim(cond_o), util::trim(cond_b));
            }
            out.push_back(rec);
            helper_handled = true;
        }

        // Multi-line guard body: report against the innermost open if.
        if (!is_if && !helper_handled && !if_stack.empty() && line_reports_failure(blanked)) {
            GoIfFrame& frame = if_stack.back();
            if (!frame.recorded) {
                rec.kind = categorize_go_condition(frame.cond_blanked);
                if (rec.kind == AssertionKind::AssertEqual) {
                    rec.expected_literal =
                        go_inequality_literal(frame.cond_original, frame.cond_blanked);
                }
                out.push_back(rec);
                frame.recorded = true;
            }
        }

        // Maintain brace depth and the if stack after processing the line.
        for (char c : blanked) {
            if (c == '{') {
                ++depth;
            } else if (c == '}') {
                --depth;
                while (!if_stack.empty() && depth < if_stack.back().depth_inside) {
                    if_stack.pop_back();
                }
            }
        }
        if (is_if && trimmed.back() == '{') {
            GoIfFrame frame;
            frame.depth_inside = depth;
            frame.cond_original = util::trim(cond_o);
            frame.cond_blanked = util::trim(cond_b);
            if_stack.push_back(std::move(frame));
        }
    }
    return out;
}

// -------------------------------- java --------------------------------------
// Kind table only: enough to categorize the Java side of a cross-language
// test pair. Method tracking is a simple `void name(` scan.

std::vector<AssertionRecord> extract_java(const std::string& text) {
    std::vector<AssertionRecord> out;
    std::string current_method;

    int lineno = 0;
    for (const auto& raw : util::split_lines(text)) {
        ++lineno;
        std::string blanked_full = blank_strings(raw, "\"");
        std::string line = strip_comment(raw, blanked_full, "//");
        std::string blanked = blank_strings(line, "\"");

        size_t v = blanked.find("void ");
        if (v != std::string::npos) {
            size_t name_start = v + 5;
            while (name_start < blanked.size() && blanked[name_start] == ' ') ++name_start;
            size_t name_end = name_start;
            while (name_end < blanked.size() && is_ident_char(blanked[name_end])) ++name_end;
            if (name_end < blanked.size() && blanked[name_end] == '(' && name_end > name_start) {
                current_method = blanked.substr(name_start, name_end - name_start);
            }
        }

        auto call_at = [&](const std::string& name) -> size_t {
            size_t pos = blanked.find(name + "(");
            if (pos == std::string::npos) return std::string::npos;
            char before = pos > 0 ? blanked[pos - 1] : ' ';
            if (is_ident_char(before)) return std::string::npos;
            return pos + name.size();
        };

        AssertionRecord rec;
        rec.line = lineno;
        rec.test_id = current_method;

        if (size_t p = call_at("assertEquals"); p != std::string::npos) {
            rec.kind = AssertionKind::AssertEqual;
            rec.expected_literal = first_literal_arg(line, blanked, p);
            out.push_back(rec);
        } else if (call_at("assertTrue") != std::string::npos) {
            rec.kind = AssertionKind::AssertTrue;
            out.push_back(rec);
        } else if (call_at("assertFalse") != std::string::npos) {
            rec.kind = AssertionKind::AssertFalse;
            out.push_back(rec);
        } else {
            for (const char* other : {"assertNull", "assertNotNull", "assertNotEquals",
                                      "assertSame", "assertThat", "assertThrows", "fail"}) {
                if (call_at(other) != std::string::npos) {
                    rec.kind = AssertionKind::Other;
                    out.push_back(rec);
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace

std::vector<AssertionRecord> extract_assertions(const std::string& text,
                                                const core::LanguageId& language) {
    if (language == "python") return extract_python(text);
    if (language == "go") return extract_go(text);
    if (language == "java") return extract_java(text);
    throw MetricsError("no assertion table for language '" + language + "'");
}

namespace {

int count_loc(const std::string& text, const std::string& comment_marker) {
    int loc = 0;
    for (const auto& raw : util::split_lines(text)) {
        std::string t = util::trim(raw);
        if (t.empty()) continue;
        if (!comment_marker.empty() && t.rfind(comment_marker, 0) == 0) continue;
        ++loc;
    }
    return loc;
}

int count_invocations(const std::string& text, const core::LanguageId& language) {
    // Keywords that precede "(" without being calls, per language.
    std::vector<std::string> keywords;
    std::string quotes = "\"'";
    std::string marker = "#";
    if (language == "python") {
        keywords = {"if", "elif", "while", "for", "return", "assert", "and", "or",
                    "not", "in", "is", "lambda", "def", "class", "with", "yield"};
    } else if (language == "go") {
        keywords = {"if", "for", "switch", "return", "func", "go", "defer", "select",
                    "range", "case"};
        quotes = "\"'`";
        marker = "//";
    } else {
        keywords = {"if", "while", "for", "switch", "return", "catch", "synchronized",
                    "assert", "new", "throw"};
        quotes = "\"";
        marker = "//";
    }

    int count = 0;
    for (const auto& raw : util::split_lines(text)) {
        std::string blanked_full = blank_strings(raw, quotes);
        std::string line = strip_comment(raw, blanked_full, marker);
        std::string blanked = blank_strings(line, quotes);
        std::string trimmed = util::trim(blanked);
        // Definitions introduce parameter lists, not calls.
        if (language == "python" &&
            (trimmed.rfind("def ", 0) == 0 || trimmed.rfind("class ", 0) == 0))
            continue;
        if (language == "go" && trimmed.rfind("func ", 0) == 0) continue;

        for (size_t i = 0; i < blanked.size(); ++i) {
            if (blanked[i] != '(') continue;
            size_t end = i;
            while (end > 0 && blanked[end - 1] == ' ') --end;
            size_t start = end;
            while (start > 0 && is_ident_char(blanked[start - 1])) --start;
            if (start == end) continue; // "(" with no identifier before it
            std::string name = blanked.substr(start, end - start);
            if (std::find(keywords.begin(), keywords.end(), name) != keywords.end()) continue;
            ++count;
        }
    }
    return count;
}

} // namespace

TestFileAnalysis analyze_test_file(const std::string& text, const core::LanguageId& language) {
    TestFileAnalysis a;
    a.assertions = extract_assertions(text, language);
    a.loc = count_loc(text, language == "python" ? "#" : "//");
    a.method_invocations = count_invocations(text, language);
    return a;
}

} // namespace xlate::metrics
