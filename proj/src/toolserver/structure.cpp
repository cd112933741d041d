#include "xlate/toolserver/structure.hpp"

#include "xlate/util/strings.hpp"

#include <algorithm>
#include <cctype>

namespace xlate::toolserver {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), ident_char);
}

// Reads an identifier starting at (or after leading spaces from) pos.
std::string read_ident(const std::string& s, size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    return s.substr(start, pos - start);
}

size_t indent_of(const std::string& line) {
    size_t i = 0, col = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
        col += line[i] == '\t' ? 8 - (col % 8) : 1;
        ++i;
    }
    return col;
}

// ---------------------------------------------------------------------------
// Go
// ---------------------------------------------------------------------------

// Blanks out comments and string/rune literals so brace counting and
// keyword matching operate on clean code text. Keeps line structure.
struct GoCleaner {
    enum class State { Code, BlockComment, DqString, RawString, Rune };
    State state = State::Code;

    std::string clean_line(const std::string& line) {
        std::string out(line.size(), ' ');
        size_t i = 0;
        while (i < line.size()) {
            char c = line[i];
            switch (state) {
            case State::Code:
                if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
                    return out; // rest of line is comment
                }
                if (c == '/' && i + 1 < line.size() && line[i + 1] == '*') {
                    state = State::BlockComment;
                    i += 2;
                    continue;
                }
                if (c == '"') {
                    state = State::DqString;
                    out[i] = '"';
                    ++i;
                    continue;
                }
                if (c == '`') {
                    state = State::RawString;
                    out[i] = '`';
                    ++i;
                    continue;
                }
                if (c == '\'') {
                    state = State::Rune;
                    ++i;
                    continue;
                }
                out[i] = c;
                ++i;
                break;
            case State::BlockComment:
                if (c == '*' && i + 1 < line.size() && line[i + 1] == '/') {
                    state = State::Code;
                    i += 2;
                    continue;
                }
                ++i;
                break;
            case State::DqString:
                if (c == '\\') {
                    i += 2;
                    continue;
                }
                if (c == '"') {
                    state = State::Code;
                    out[i] = '"';
                }
                ++i;
                break;
            case State::RawString:
                if (c == '`') {
                    state = State::Code;
                    out[i] = '`';
                }
                ++i;
                break;
            case State::Rune:
                if (c == '\\') {
                    i += 2;
                    continue;
                }
                if (c == '\'') state = State::Code;
                ++i;
                break;
            }
        }
        // Double-quoted strings and runes do not span lines in Go.
        if (state == State::DqString || state == State::Rune) state = State::Code;
        return out;
    }
};

// Extracts the quoted import path from a line like `alias "net/http"`.
// Quote positions come from the cleaned line (so quotes inside comments
// are ignored); the path text comes from the raw line.
std::string import_path_on_line(const std::string& cleaned, const std::string& raw) {
    auto open = cleaned.find('"');
    if (open == std::string::npos) return "";
    auto close = cleaned.find('"', open + 1);
    if (close == std::string::npos || close >= raw.size()) return "";
    return raw.substr(open + 1, close - open - 1);
}

class GoAdapter final : public GrammarAdapter {
public:
    std::string language() const override { return "go"; }

    SkeletonRecord scan(const std::string& filepath, const std::string& text) const override {
        SkeletonRecord rec;
        rec.filepath = filepath;
        rec.language = "go";

        auto raw_lines = util::split_lines(text);
        GoCleaner cleaner;
        std::vector<std::string> lines;
        lines.reserve(raw_lines.size());
        for (const auto& l : raw_lines) lines.push_back(cleaner.clean_line(l));
        if (cleaner.state == GoCleaner::State::BlockComment ||
            cleaner.state == GoCleaner::State::RawString) {
            rec.parse_ok = false;
            rec.parse_message = "unterminated comment or raw string at end of file";
        }

        int depth = 0;
        // Currently open brace-delimited declaration (func/struct/interface).
        struct Open {
            SkeletonEntry entry;
            std::vector<SkeletonEntry>* bucket = nullptr;
            bool brace_seen = false;
        };
        std::optional<Open> open;
        // Inside a parenthesized import/var/const group.
        enum class Group { None, Import, Var, Const };
        Group group = Group::None;

        for (size_t li = 0; li < lines.size(); ++li) {
            const std::string& line = lines[li];
            const std::string& raw = raw_lines[li];
            const int line_no = static_cast<int>(li) + 1;
            const std::string trimmed = util::trim(line);

            if (open) {
                // Waiting for this declaration's body to close.
                for (char c : line) {
                    if (c == '{') {
                        ++depth;
                        open->brace_seen = true;
                    } else if (c == '}') {
                        --depth;
                    }
                }
                if (open->brace_seen && depth == 0) {
                    open->entry.end_line = line_no;
                    open->bucket->push_back(open->entry);
                    open.reset();
                }
                continue;
            }

            if (group != Group::None) {
                if (trimmed.rfind(')', 0) == 0) {
                    group = Group::None;
                } else if (group == Group::Import) {
                    std::string path = import_path_on_line(line, raw);
                    if (!path.empty()) rec.imports.push_back({path, "import", line_no, line_no});
                } else if (!trimmed.empty()) {
                    // var/const group line: `name [type] [= value]` or a
                    // comma-separated name list.
                    size_t pos = 0;
                    std::string first = read_ident(trimmed, pos);
                    std::vector<std::string> names;
                    if (is_identifier(first)) names.push_back(first);
                    while (pos < trimmed.size() && trimmed[pos] == ',') {
                        ++pos;
                        std::string n = read_ident(trimmed, pos);
                        if (is_identifier(n)) names.push_back(n);
                    }
                    int end_line = line_no;
                    // A composite-literal initializer may span lines; swallow
                    // until braces balance.
                    int gdepth = 0;
                    for (char c : line) {
                        if (c == '{') ++gdepth;
                        if (c == '}') --gdepth;
                    }
                    while (gdepth > 0 && li + 1 < lines.size()) {
                        ++li;
                        for (char c : lines[li]) {
                            if (c == '{') ++gdepth;
                            if (c == '}') --gdepth;
                        }
                        end_line = static_cast<int>(li) + 1;
                    }
                    for (const auto& n : names) {
                        rec.globals.push_back({n, "global", line_no, end_line});
                    }
                }
                continue;
            }

            if (depth == 0) {
                if (trimmed.rfind("import (", 0) == 0) {
                    group = Group::Import;
                    continue;
                }
                if (trimmed.rfind("import ", 0) == 0) {
                    std::string path = import_path_on_line(line, raw);
                    if (!path.empty()) rec.imports.push_back({path, "import", line_no, line_no});
                    continue;
                }
                if (trimmed.rfind("var (", 0) == 0) {
                    group = Group::Var;
                    continue;
                }
                if (trimmed.rfind("const (", 0) == 0) {
                    group = Group::Const;
                    continue;
                }
                if (trimmed.rfind("func ", 0) == 0) {
                    handle_func(rec, lines, raw_lines, li, depth, open);
                    continue;
                }
                if (trimmed.rfind("type ", 0) == 0) {
                    handle_type(rec, lines, li, depth, open);
                    continue;
                }
                if (trimmed.rfind("var ", 0) == 0 || trimmed.rfind("const ", 0) == 0) {
                    size_t pos = trimmed.find(' ');
                    std::string name = read_ident(trimmed, pos);
                    if (is_identifier(name)) {
                        std::vector<std::string> names{name};
                        while (pos < trimmed.size() && trimmed[pos] == ',') {
                            ++pos;
                            std::string n = read_ident(trimmed, pos);
                            if (is_identifier(n)) names.push_back(n);
                        }
                        int end_line = line_no;
                        int gdepth = 0;
                        for (char c : line) {
                            if (c == '{') ++gdepth;
                            if (c == '}') --gdepth;
                        }
                        while (gdepth > 0 && li + 1 < lines.size()) {
                            ++li;
                            for (char c : lines[li]) {
                                if (c == '{') ++gdepth;
                                if (c == '}') --gdepth;
                            }
                            end_line = static_cast<int>(li) + 1;
                        }
                        for (const auto& n : names) {
                            rec.globals.push_back({n, "global", line_no, end_line});
                        }
                    }
                    continue;
                }
            }

            for (char c : line) {
                if (c == '{') ++depth;
                if (c == '}') --depth;
            }
        }

        if (open) {
            // Unclosed declaration: keep it, flag the parse.
            open->entry.end_line = static_cast<int>(lines.size());
            open->bucket->push_back(open->entry);
            rec.parse_ok = false;
            rec.parse_message = "unclosed declaration at end of file";
        }
        if (depth != 0 && rec.parse_ok) {
            rec.parse_ok = false;
            rec.parse_message = "unbalanced braces";
        }
        return rec;
    }

private:
    // `func Name(...)` or `func (recv *Type) Name(...)`.
    template <typename OpenT>
    void handle_func(SkeletonRecord& rec, const std::vector<std::string>& lines,
                     const std::vector<std::string>& /*raw*/, size_t& li, int& depth,
                     OpenT& open) const {
        const std::string& line = lines[li];
        const int line_no = static_cast<int>(li) + 1;
        size_t pos = line.find("func") + 4;
        std::string receiver;
        while (pos < line.size() && line[pos] == ' ') ++pos;
        if (pos < line.size() && line[pos] == '(') {
            // Receiver list: skip the variable name, take the type.
            size_t close = line.find(')', pos);
            if (close == std::string::npos) return;
            std::string recv = line.substr(pos + 1, close - pos - 1);
            auto parts = util::split(util::trim(recv), ' ');
            std::string type_tok = parts.empty() ? "" : util::trim(parts.back());
            while (!type_tok.empty() && (type_tok[0] == '*' || type_tok[0] == '&')) {
                type_tok.erase(type_tok.begin());
            }
            receiver = type_tok;
            pos = close + 1;
        }
        std::string name = read_ident(line, pos);
        if (!is_identifier(name)) return;

        SkeletonEntry entry;
        entry.name = receiver.empty() ? name : receiver + "." + name;
        entry.kind = receiver.empty() ? "function" : "method";
        entry.start_line = line_no;
        entry.end_line = line_no;

        track_braced_body(lines, li, depth, entry);
        if (entry.end_line >= entry.start_line && depth == 0) {
            rec.functions.push_back(entry);
        } else {
            open.emplace();
            open->entry = entry;
            open->bucket = &rec.functions;
            open->brace_seen = depth > 0;
        }
    }

    // `type Name struct {...}` / `type Name interface {...}`.
    template <typename OpenT>
    void handle_type(SkeletonRecord& rec, const std::vector<std::string>& lines, size_t& li,
                     int& depth, OpenT& open) const {
        const std::string& line = lines[li];
        const int line_no = static_cast<int>(li) + 1;
        size_t pos = line.find("type") + 4;
        std::string name = read_ident(line, pos);
        if (!is_identifier(name)) return;
        std::string rest = util::trim(line.substr(pos));

        bool is_struct = rest.rfind("struct", 0) == 0;
        bool is_interface = rest.rfind("interface", 0) == 0;
        if (!is_struct && !is_interface) return; // plain alias: not a fragment category

        SkeletonEntry entry;
        entry.name = name;
        entry.kind = is_struct ? "struct" : "interface";
        entry.start_line = line_no;
        entry.end_line = line_no;

        track_braced_body(lines, li, depth, entry);
        auto& bucket = is_struct ? rec.structs : rec.classes;
        if (entry.end_line >= entry.start_line && depth == 0) {
            bucket.push_back(entry);
        } else {
            open.emplace();
            open->entry = entry;
            open->bucket = &bucket;
            open->brace_seen = depth > 0;
        }
    }

    // Counts braces on the declaration line itself. If the body closes on
    // this very line the entry is complete (depth back to 0); otherwise the
    // caller parks it as the open declaration.
    void track_braced_body(const std::vector<std::string>& lines, size_t li, int& depth,
                           SkeletonEntry& entry) const {
        bool seen = false;
        for (char c : lines[li]) {
            if (c == '{') {
                ++depth;
                seen = true;
            } else if (c == '}') {
                --depth;
            }
        }
        if (seen && depth == 0) {
            entry.end_line = entry.start_line;
        } else {
            entry.end_line = entry.start_line - 1; // marks "not closed yet"
        }
    }
};

// ---------------------------------------------------------------------------
// Python
// ---------------------------------------------------------------------------

// Per-line lexical state for Python: triple-quoted strings and bracket
// nesting survive line breaks; both make the next line a continuation.
struct PyLineInfo {
    bool starts_in_string = false; // line begins inside a triple-quoted string
    bool continuation = false;     // inside brackets or after a backslash
    bool blank_or_comment = true;  // nothing but whitespace/comment outside strings
    bool ends_with_colon_block = false;
    size_t indent = 0;
    std::string code; // cleaned text (strings kept as quotes, comments stripped)
};

struct PyScanner {
    enum class Str { None, Single, Double, TripleSingle, TripleDouble };
    Str state = Str::None;
    int bracket_depth = 0;
    bool backslash_continuation = false;

    PyLineInfo scan_line(const std::string& line) {
        PyLineInfo info;
        info.starts_in_string = state == Str::TripleSingle || state == Str::TripleDouble;
        info.continuation = info.starts_in_string || bracket_depth > 0 || backslash_continuation;
        info.indent = indent_of(line);
        backslash_continuation = false;

        std::string code;
        code.reserve(line.size());
        size_t i = 0;
        while (i < line.size()) {
            char c = line[i];
            if (state == Str::TripleSingle || state == Str::TripleDouble) {
                const char q = state == Str::TripleSingle ? '\'' : '"';
                if (c == q && i + 2 < line.size() + 1 && line.compare(i, 3, std::string(3, q)) == 0) {
                    state = Str::None;
                    i += 3;
                    code += q;
                    continue;
                }
                ++i;
                continue;
            }
            if (state == Str::Single || state == Str::Double) {
                const char q = state == Str::Single ? '\'' : '"';
                if (c == '\\') {
                    i += 2;
                    continue;
                }
                if (c == q) {
                    state = Str::None;
                    code += q;
                }
                ++i;
                continue;
            }
            // Normal code.
            if (c == '#') break; // comment to end of line
            if (c == '\'' || c == '"') {
                if (line.compare(i, 3, std::string(3, c)) == 0) {
                    state = c == '\'' ? Str::TripleSingle : Str::TripleDouble;
                    i += 3;
                } else {
                    state = c == '\'' ? Str::Single : Str::Double;
                    ++i;
                }
                code += c;
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++bracket_depth;
            if (c == ')' || c == ']' || c == '}') --bracket_depth;
            code += c;
            ++i;
        }
        // Single-quoted strings do not continue across lines (implicit
        // close, as CPython would report an error we tolerate).
        if (state == Str::Single || state == Str::Double) state = Str::None;
        if (!code.empty() && code.back() == '\\') {
            backslash_continuation = true;
            code.pop_back();
        }
        info.code = code;
        std::string t = util::trim(code);
        info.blank_or_comment = t.empty() && !info.starts_in_string;
        return info;
    }
};

class PythonAdapter final : public GrammarAdapter {
public:
    std::string language() const override { return "python"; }

    SkeletonRecord scan(const std::string& filepath, const std::string& text) const override {
        SkeletonRecord rec;
        rec.filepath = filepath;
        rec.language = "python";

        auto raw_lines = util::split_lines(text);
        PyScanner scanner;
        std::vector<PyLineInfo> lines;
        lines.reserve(raw_lines.size());
        for (const auto& l : raw_lines) lines.push_back(scanner.scan_line(l));
        if (scanner.state == PyScanner::Str::TripleSingle ||
            scanner.state == PyScanner::Str::TripleDouble) {
            rec.parse_ok = false;
            rec.parse_message = "unterminated triple-quoted string";
        }
        if (scanner.bracket_depth != 0 && rec.parse_ok) {
            rec.parse_ok = false;
            rec.parse_message = "unbalanced brackets";
        }

        // Scope stack of enclosing class/def blocks. Entries carry an index
        // into the bucket they were appended to so end lines can be patched
        // when the scope closes.
        struct Scope {
            size_t indent;
            std::string name;
            bool is_class;
            std::vector<SkeletonEntry>* bucket;
            size_t entry_index;
        };
        std::vector<Scope> scopes;

        auto update_ends = [&](int line_no) {
            for (auto& s : scopes) {
                auto& e = (*s.bucket)[s.entry_index];
                if (line_no > e.end_line) e.end_line = line_no;
            }
        };
        auto qualify = [&](const std::string& name) {
            std::string q;
            for (const auto& s : scopes) q += s.name + ".";
            return q + name;
        };

        for (size_t li = 0; li < lines.size(); ++li) {
            const PyLineInfo& info = lines[li];
            const int line_no = static_cast<int>(li) + 1;

            if (info.continuation) {
                if (!info.blank_or_comment || info.starts_in_string) update_ends(line_no);
                continue;
            }
            if (info.blank_or_comment) continue;

            while (!scopes.empty() && info.indent <= scopes.back().indent) scopes.pop_back();
            update_ends(line_no);

            std::string t = util::trim(info.code);

            if (t.rfind("import ", 0) == 0) {
                // `import a.b as x, c` → entries a.b and c.
                for (auto& piece : util::split(t.substr(7), ',')) {
                    std::string mod = util::trim(piece);
                    auto as_pos = mod.find(" as ");
                    if (as_pos != std::string::npos) mod = util::trim(mod.substr(0, as_pos));
                    if (!mod.empty()) rec.imports.push_back({mod, "import", line_no, line_no});
                }
                continue;
            }
            if (t.rfind("from ", 0) == 0) {
                // `from a.b import c, d as e` → entries a.b.c and a.b.d.
                auto imp = t.find(" import ");
                if (imp != std::string::npos) {
                    std::string mod = util::trim(t.substr(5, imp - 5));
                    std::string names = t.substr(imp + 8);
                    for (auto& piece : util::split(names, ',')) {
                        std::string n = util::trim(piece);
                        auto as_pos = n.find(" as ");
                        if (as_pos != std::string::npos) n = util::trim(n.substr(0, as_pos));
                        if (n == "*" ) {
                            rec.imports.push_back({mod + ".*", "import", line_no, line_no});
                        } else if (!n.empty() && n != "(" && n != ")") {
                            n = util::replace_all(n, "(", "");
                            n = util::replace_all(n, ")", "");
                            n = util::trim(n);
                            if (!n.empty()) {
                                rec.imports.push_back({mod + "." + n, "import", line_no, line_no});
                            }
                        }
                    }
                }
                continue;
            }

            bool is_async_def = t.rfind("async def ", 0) == 0;
            if (t.rfind("def ", 0) == 0 || is_async_def) {
                size_t pos = is_async_def ? 10 : 4;
                std::string name = read_ident(t, pos);
                if (!is_identifier(name)) continue;
                bool in_class = !scopes.empty() && scopes.back().is_class;
                SkeletonEntry e{qualify(name), in_class ? "method" : "function", line_no, line_no};
                rec.functions.push_back(e);
                scopes.push_back({info.indent, name, false, &rec.functions,
                                  rec.functions.size() - 1});
                continue;
            }
            if (t.rfind("class ", 0) == 0) {
                size_t pos = 6;
                std::string name = read_ident(t, pos);
                if (!is_identifier(name)) continue;
                SkeletonEntry e{qualify(name), "class", line_no, line_no};
                rec.classes.push_back(e);
                scopes.push_back({info.indent, name, true, &rec.classes,
                                  rec.classes.size() - 1});
                continue;
            }

            // Module-level assignments become globals.
            if (scopes.empty()) {
                scan_global(rec, t, line_no);
                // A bracketed initializer may continue over following lines;
                // update_ends in the continuation branch handles class/def
                // scopes, but globals need their own end patch.
                if (!rec.globals.empty() && rec.globals.back().start_line == line_no) {
                    size_t last = li;
                    while (last + 1 < lines.size() && lines[last + 1].continuation) ++last;
                    int end_line = static_cast<int>(last) + 1;
                    for (auto it = rec.globals.rbegin();
                         it != rec.globals.rend() && it->start_line == line_no; ++it) {
                        it->end_line = end_line;
                    }
                }
            }
        }
        return rec;
    }

private:
    // `NAME = ...`, `NAME: T = ...`, `A, B = ...` at module level. Skips
    // comparisons and augmented assignments.
    void scan_global(SkeletonRecord& rec, const std::string& code, int line_no) const {
        // Find a top-level '=' that is not ==, <=, >=, !=, += etc.
        int depth = 0;
        size_t eq = std::string::npos;
        for (size_t i = 0; i < code.size(); ++i) {
            char c = code[i];
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') --depth;
            if (depth == 0 && c == '=') {
                if (i + 1 < code.size() && code[i + 1] == '=') {
                    ++i;
                    continue;
                }
                if (i > 0 && std::string("=!<>+-*/%&|^:@").find(code[i - 1]) != std::string::npos) {
                    // Walrus / comparison / augmented — except ':' which is
                    // an annotated assignment and does introduce a global.
                    if (code[i - 1] != ':') continue;
                }
                eq = i;
                break;
            }
        }
        if (eq == std::string::npos) return;
        std::string lhs = util::trim(code.substr(0, eq));
        if (!lhs.empty() && lhs.back() == ':') lhs.pop_back(); // annotated: NAME: T =
        // Strip an annotation `name: T`.
        auto colon = lhs.find(':');
        if (colon != std::string::npos) lhs = util::trim(lhs.substr(0, colon));
        for (auto& piece : util::split(lhs, ',')) {
            std::string name = util::trim(piece);
            if (is_identifier(name)) {
                rec.globals.push_back({name, "global", line_no, line_no});
            }
        }
    }
};

const GoAdapter go_adapter;
const PythonAdapter python_adapter;

} // namespace

const GrammarAdapter* adapter_for(const std::string& language) {
    if (language == "go") return &go_adapter;
    if (language == "python") return &python_adapter;
    return nullptr;
}

SkeletonRecord get_file_structure(const std::string& filepath, const std::string& language,
                                  const std::string& text) {
    const GrammarAdapter* adapter = adapter_for(language);
    if (!adapter) {
        throw ToolError(ToolError::Kind::CapabilityUnavailable,
                        "get_file_structure: no grammar adapter for language '" + language + "'");
    }
    return adapter->scan(filepath, text);
}

std::vector<core::Fragment> skeleton_fragments(const SkeletonRecord& record) {
    std::vector<core::Fragment> out;
    auto add = [&](const std::vector<SkeletonEntry>& entries) {
        for (const auto& e : entries) {
            core::Fragment f;
            f.file = record.filepath;
            f.qualified_name = e.name;
            f.start_line = e.start_line;
            f.end_line = e.end_line;
            auto kind = core::fragment_kind_from_name(e.kind);
            f.kind = kind.value_or(core::FragmentKind::Function);
            out.push_back(f);
        }
    };
    add(record.classes);
    add(record.functions);
    add(record.globals);
    add(record.structs);
    return out;
}

} // namespace xlate::toolserver
