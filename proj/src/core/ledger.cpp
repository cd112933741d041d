#include "xlate/core/ledger.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace xlate::core {

double CostLedger::dollars() const {
    double raw = static_cast<double>(total.input_tokens) * rates.input_per_token +
                 static_cast<double>(total.output_tokens) * rates.output_per_token;
    // Round half away from zero at 6 decimal places so rendered dollar
    // amounts are stable across platforms.
    return std::round(raw * 1e6) / 1e6;
}

bool is_known_agent(const std::string& agent) {
    return agent == "analyzer" || agent == "planner" || agent == "translator" ||
           agent == "validator";
}

CostLedger ledger_add(const CostLedger& ledger, const std::string& agent,
                      long long in_tok, long long out_tok, double secs) {
    if (!is_known_agent(agent)) {
        throw std::invalid_argument("ledger_add: unknown agent '" + agent + "'");
    }
    if (in_tok < 0 || out_tok < 0 || secs < 0) {
        throw std::invalid_argument("ledger_add: negative delta");
    }
    CostLedger next = ledger;
    auto& e = next.per_agent[agent];
    e.input_tokens += in_tok;
    e.output_tokens += out_tok;
    e.wall_seconds += secs;
    next.total.input_tokens += in_tok;
    next.total.output_tokens += out_tok;
    next.total.wall_seconds += secs;
    return next;
}

namespace {

nlohmann::json entry_to_json(const LedgerEntry& e) {
    return {{"input_tokens", e.input_tokens},
            {"output_tokens", e.output_tokens},
            {"wall_seconds", e.wall_seconds}};
}

LedgerEntry entry_from_json(const nlohmann::json& j) {
    LedgerEntry e;
    e.input_tokens = j.at("input_tokens").get<long long>();
    e.output_tokens = j.at("output_tokens").get<long long>();
    e.wall_seconds = j.at("wall_seconds").get<double>();
    return e;
}

} // namespace

nlohmann::json ledger_to_json(const CostLedger& ledger) {
    nlohmann::json agents = nlohmann::json::object();
    for (const auto& [name, e] : ledger.per_agent) agents[name] = entry_to_json(e);
    return {{"total", entry_to_json(ledger.total)},
            {"per_agent", agents},
            {"rates",
             {{"input_per_token", ledger.rates.input_per_token},
              {"output_per_token", ledger.rates.output_per_token}}},
            {"dollars", ledger.dollars()}};
}

CostLedger ledger_from_json(const nlohmann::json& j) {
    CostLedger ledger;
    ledger.total = entry_from_json(j.at("total"));
    for (const auto& [name, e] : j.at("per_agent").items()) {
        ledger.per_agent[name] = entry_from_json(e);
    }
    const auto& r = j.at("rates");
    ledger.rates.input_per_token = r.at("input_per_token").get<double>();
    ledger.rates.output_per_token = r.at("output_per_token").get<double>();
    return ledger;
}

} // namespace xlate::core
