#pragma once

#include "xlate/core/types.hpp"

#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace xlate::core {

// Token, dollar, and wall-clock accounting, broken down per agent.
// Immutable-by-convention: ledger_add returns a new value so ledgers can
// be shared across threads without locks.
struct LedgerEntry {
    long long input_tokens = 0;
    long long output_tokens = 0;
    double wall_seconds = 0.0;

    bool operator==(const LedgerEntry&) const = default;
};

struct CostLedger {
    LedgerEntry total;
    std::map<std::string, LedgerEntry> per_agent;
    RateTable rates;

    // Dollars recomputed from the rate table; rounded to 6 decimal places
    // when rendered.
    double dollars() const;
};

// The agent ids the ledger accepts. Anything else is a hard error: a typo
// in an agent name must not silently create a new accounting bucket.
bool is_known_agent(const std::string& agent);

// Returns a copy of `ledger` with the deltas applied to `agent` and to the
// totals. Throws std::invalid_argument on unknown agent or negative counts.
CostLedger ledger_add(const CostLedger& ledger, const std::string& agent,
                      long long in_tok, long long out_tok, double secs);

nlohmann::json ledger_to_json(const CostLedger& ledger);
CostLedger ledger_from_json(const nlohmann::json& j);

} // namespace xlate::core
