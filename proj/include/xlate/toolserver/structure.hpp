#pragma once

#include "xlate/core/types.hpp"
#include "xlate/toolserver/types.hpp"

#include <string>
#include <vector>

namespace xlate::toolserver {

// A grammar adapter turns one file's text into the five-category skeleton.
// Adapters are hand-written scanners tuned per language; each declares its
// own category mapping (e.g. Go interfaces land in `classes` with kind
// "interface", methods in `functions` with a Type.name qualified name).
class GrammarAdapter {
public:
    virtual ~GrammarAdapter() = default;
    virtual std::string language() const = 0;
    virtual SkeletonRecord scan(const std::string& filepath, const std::string& text) const = 0;
};

// nullptr when no adapter exists for the language.
const GrammarAdapter* adapter_for(const std::string& language);

// Convenience: adapter lookup + scan. Throws ToolError(CapabilityUnavailable)
// for unsupported languages.
SkeletonRecord get_file_structure(const std::string& filepath, const std::string& language,
                                  const std::string& text);

// The skeleton entries that count as translation units: classes, functions,
// globals, and structs (imports are not fragments).
std::vector<core::Fragment> skeleton_fragments(const SkeletonRecord& record);

} // namespace xlate::toolserver
