#include "xlate/metrics/compare.hpp"

#include "xlate/util/strings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace xlate::metrics {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw MetricsError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()) + ")");
    }
    if (a.empty()) throw MetricsError("cosine: empty vectors");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw MetricsError("cosine: zero vector has no direction");
    double c = dot / (std::sqrt(na) * std::sqrt(nb));
    // Rounding can push |c| a hair past 1; clamp so the contract holds.
    return std::max(-1.0, std::min(1.0, c));
}

namespace {

std::vector<TypedLiteral> equal_literals(const std::vector<AssertionRecord>& records) {
    std::vector<TypedLiteral> out;
    for (const auto& r : records) {
        if (r.kind == AssertionKind::AssertEqual && r.expected_literal) {
            out.push_back(*r.expected_literal);
        }
    }
    return out;
}

// Multiset overlap under literals_match: each literal can match at most
// one partner. Quadratic, but assertion counts are tiny.
int multiset_overlap(std::vector<TypedLiteral> a, std::vector<TypedLiteral> b) {
    int matching = 0;
    for (const auto& x : a) {
        for (auto it = b.begin(); it != b.end(); ++it) {
            if (literals_match(x, *it)) {
                b.erase(it);
                ++matching;
                break;
            }
        }
    }
    return matching;
}

std::map<AssertionKind, int> kind_counts(const std::vector<AssertionRecord>& records) {
    std::map<AssertionKind, int> counts;
    for (const auto& r : records) ++counts[r.kind];
    return counts;
}

} // namespace

TestPairMetrics compare_test_pair(const TestFileAnalysis& src, const TestFileAnalysis& tgt,
                                  const std::vector<double>& src_embedding,
                                  const std::vector<double>& tgt_embedding) {
    TestPairMetrics m;
    m.src_assertions = static_cast<int>(src.assertions.size());
    m.tgt_assertions = static_cast<int>(tgt.assertions.size());
    m.count_match = m.src_assertions == m.tgt_assertions;

    std::vector<TypedLiteral> src_lit = equal_literals(src.assertions);
    std::vector<TypedLiteral> tgt_lit = equal_literals(tgt.assertions);
    m.equal_output_total = static_cast<int>(std::max(src_lit.size(), tgt_lit.size()));
    m.equal_output_matching = multiset_overlap(src_lit, tgt_lit);

    std::map<AssertionKind, int> sc = kind_counts(src.assertions);
    std::map<AssertionKind, int> tc = kind_counts(tgt.assertions);
    for (AssertionKind k : {AssertionKind::AssertEqual, AssertionKind::AssertTrue,
                            AssertionKind::AssertFalse, AssertionKind::Other}) {
        int s = sc.count(k) ? sc[k] : 0;
        int t = tc.count(k) ? tc[k] : 0;
        double pct = (s == 0 && t == 0)
                         ? 100.0
                         : 100.0 * static_cast<double>(std::min(s, t)) / std::max(s, t);
        m.type_match_percent[assertion_kind_name(k)] = pct;
    }

    m.cosine_similarity = cosine(src_embedding, tgt_embedding);

    m.src_loc = src.loc;
    m.tgt_loc = tgt.loc;
    m.src_method_invocations = src.method_invocations;
    m.tgt_method_invocations = tgt.method_invocations;
    return m;
}

std::map<std::string, std::vector<double>> parse_embeddings(const std::string& text) {
    std::map<std::string, std::vector<double>> out;
    size_t lineno = 0;
    for (const auto& raw : util::split_lines(text)) {
        ++lineno;
        std::string line = util::trim(raw);
        if (line.empty() || line[0] == '#') continue;

        std::vector<std::string> tokens;
        for (const auto& tok : util::split(line, ' ')) {
            if (!tok.empty()) tokens.push_back(tok);
        }
        if (tokens.size() < 2) {
            throw MetricsError("embeddings line " + std::to_string(lineno) +
                               ": expected '<test_id> <dimension> <values...>'");
        }
        const std::string& id = tokens[0];
        if (out.count(id)) {
            throw MetricsError("embeddings line " + std::to_string(lineno) + ": duplicate id '" +
                               id + "'");
        }
        long dim = 0;
        try {
            size_t used = 0;
            dim = std::stol(tokens[1], &used);
            if (used != tokens[1].size()) throw std::invalid_argument(tokens[1]);
        } catch (const std::exception&) {
            throw MetricsError("embeddings line " + std::to_string(lineno) +
                               ": dimension is not a number: '" + tokens[1] + "'");
        }
        if (dim < 1 || static_cast<size_t>(dim) != tokens.size() - 2) {
            throw MetricsError("embeddings line " + std::to_string(lineno) + ": declared " +
                               std::to_string(dim) + " dimensions but found " +
                               std::to_string(tokens.size() - 2) + " values");
        }
        std::vector<double> values;
        values.reserve(static_cast<size_t>(dim));
        for (size_t i = 2; i < tokens.size(); ++i) {
            try {
                size_t used = 0;
                values.push_back(std::stod(tokens[i], &used));
                if (used != tokens[i].size()) throw std::invalid_argument(tokens[i]);
            } catch (const std::exception&) {
                throw MetricsError("embeddings line " + std::to_string(lineno) +
                                   ": bad value '" + tokens[i] + "'");
            }
        }
        out[id] = std::move(values);
    }
    return out;
}

} // namespace xlate::metrics
