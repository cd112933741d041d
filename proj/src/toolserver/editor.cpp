#include "xlate/toolserver/editor.hpp"

#include "xlate/util/fs.hpp"

#include <algorithm>
#include <numeric>

namespace xlate::toolserver {

namespace {

// Byte offsets of each line start; a final entry marks end-of-text so the
// position one past the last line (line n+1, column 1) is addressable.
std::vector<size_t> line_starts(const std::string& text) {
    std::vector<size_t> starts{0};
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') starts.push_back(i + 1);
    }
    return starts;
}

// Converts a 1-based (line, column) into a byte offset, validating bounds.
size_t to_offset(const std::vector<size_t>& starts, const std::string& text,
                 int line, int column, const std::string& what) {
    if (line < 1 || column < 1) {
        throw ToolError(ToolError::Kind::InvalidEdit, what + ": coordinates are 1-based");
    }
    size_t li = static_cast<size_t>(line - 1);
    if (li >= starts.size()) {
        throw ToolError(ToolError::Kind::InvalidEdit,
                        what + ": line " + std::to_string(line) + " beyond end of file");
    }
    size_t line_start = starts[li];
    size_t line_end = li + 1 < starts.size() ? starts[li + 1] - 1 /*'\n'*/ : text.size();
    size_t off = line_start + static_cast<size_t>(column - 1);
    // The column may point one past the last character (insertion at the
    // line end / before the newline).
    if (off > line_end) {
        throw ToolError(ToolError::Kind::InvalidEdit,
                        what + ": column " + std::to_string(column) + " beyond end of line " +
                            std::to_string(line));
    }
    return off;
}

} // namespace

std::string splice_edits(const std::string& original, std::vector<TextEdit> edits,
                         const EditFailureHook& hook) {
    const auto starts = line_starts(original);

    struct Resolved {
        size_t begin, end, index;
        const std::string* replacement;
    };
    std::vector<Resolved> resolved;
    resolved.reserve(edits.size());
    for (size_t i = 0; i < edits.size(); ++i) {
        const auto& e = edits[i];
        size_t b = to_offset(starts, original, e.start.line, e.start.column,
                             "edit " + std::to_string(i) + " start");
        size_t en = to_offset(starts, original, e.end.line, e.end.column,
                              "edit " + std::to_string(i) + " end");
        if (en < b) {
            throw ToolError(ToolError::Kind::InvalidEdit,
                            "edit " + std::to_string(i) + ": end precedes start");
        }
        resolved.push_back({b, en, i, &e.replacement});
    }

    // Sort by start; equal starts keep batch order. Adjacent ranges may
    // touch (half-open) but never overlap.
    std::stable_sort(resolved.begin(), resolved.end(),
                     [](const Resolved& a, const Resolved& b) { return a.begin < b.begin; });
    for (size_t i = 1; i < resolved.size(); ++i) {
        if (resolved[i - 1].end > resolved[i].begin) {
            throw ToolError(ToolError::Kind::InvalidEdit,
                            "edits " + std::to_string(resolved[i - 1].index) + " and " +
                                std::to_string(resolved[i].index) + " overlap");
        }
    }

    // Splice back-to-front so earlier offsets stay valid.
    std::string text = original;
    for (auto it = resolved.rbegin(); it != resolved.rend(); ++it) {
        if (hook) hook(it->index);
        text.replace(it->begin, it->end - it->begin, *it->replacement);
    }
    return text;
}

EditResult apply_edits(const std::filesystem::path& file, const std::vector<TextEdit>& edits,
                       const EditFailureHook& hook) {
    if (!std::filesystem::is_regular_file(file)) {
        throw ToolError(ToolError::Kind::NotFound, "edit_file: no such file: " + file.string());
    }
    if (edits.empty()) return {0};
    const std::string original = util::read_file(file);
    std::string next = splice_edits(original, edits, hook);
    util::write_file_atomic(file, next);
    return {edits.size()};
}

} // namespace xlate::toolserver
