#pragma once

#include "xlate/metrics/assertions.hpp"

#include <map>
#include <string>
#include <vector>

namespace xlate::metrics {

// dot(a,b) / (|a|·|b|), in [-1,1]. Dimension mismatches and zero vectors
// are caller errors, not 0.0 — a silent zero would read as "orthogonal".
double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Pairwise comparison of one source-language test file against its
// translation. Counting basis is per-assertion throughout (recorded in the
// report header as equal_output_basis).
struct TestPairMetrics {
    int src_assertions = 0;
    int tgt_assertions = 0;
    bool count_match = false; // exact equality of totals

    // Among assert-equal records carrying an extractable literal:
    // total = max(src, tgt) literal count, matching = multiset overlap
    // under literals_match.
    int equal_output_total = 0;
    int equal_output_matching = 0;

    // Per kind: 100 * min(src_count, tgt_count) / max(...), and 100 when
    // the kind appears on neither side.
    std::map<std::string, double> type_match_percent;

    double cosine_similarity = 0.0;

    int src_loc = 0;
    int tgt_loc = 0;
    int src_method_invocations = 0;
    int tgt_method_invocations = 0;

    bool operator==(const TestPairMetrics&) const = default;
};

TestPairMetrics compare_test_pair(const TestFileAnalysis& src, const TestFileAnalysis& tgt,
                                  const std::vector<double>& src_embedding,
                                  const std::vector<double>& tgt_embedding);

// Embedding vectors arrive from an external provider as columnar text:
//
//   # comment
//   <test_id> <dimension> <v1> <v2> ... <vN>
//
// Duplicate ids, dimension/value-count disagreements, and unparseable
// numbers are errors.
std::map<std::string, std::vector<double>> parse_embeddings(const std::string& text);

} // namespace xlate::metrics
