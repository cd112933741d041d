#pragma once

#include "xlate/toolserver/types.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace xlate::toolserver {

struct EditResult {
    size_t applied = 0;
};

// Test seam: invoked just before splice number `index` is performed on the
// in-memory copy; throwing simulates a failure at that point. Because all
// splicing happens in memory and the file is replaced with a single
// write-temp-then-rename, a throw at ANY index leaves the on-disk file
// byte-identical to the original.
using EditFailureHook = std::function<void(size_t index)>;

// Applies the whole batch to the in-memory text; ranges refer to the
// original text. Throws ToolError(InvalidEdit) on overlap or out-of-bounds.
std::string splice_edits(const std::string& original, std::vector<TextEdit> edits,
                         const EditFailureHook& hook = {});

// splice_edits + atomic file replacement. An empty batch touches nothing.
EditResult apply_edits(const std::filesystem::path& file, const std::vector<TextEdit>& edits,
                       const EditFailureHook& hook = {});

} // namespace xlate::toolserver
