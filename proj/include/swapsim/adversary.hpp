#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "swapsim/protocols.hpp"

namespace swapsim {

struct OmitEdit {
    std::string step;
};

struct DelayEdit {
    std::string step;
    Round to_round = 0;
};

// An unscripted submission. `secret_spec` is one of
//   "own:<label>"    a secret the party created,
//   "public:<hex>"   the secret behind a hashlock, once published,
//   "literal:<hex>"  raw bytes (how a scenario can express clairvoyance,
//                    which no_clairvoyance_check then flags),
// or empty for secretless actions.
struct ExtraEdit {
    Round round = 0;
    ChainId chain;
    std::string kind;  // claim | redeem | refund | deposit_premium | deposit_principal | add_clause
    ContractId target;
    std::string secret_spec;
    Round clause_deadline = 0;  // add_clause only
};

using Edit = std::variant<OmitEdit, DelayEdit, ExtraEdit>;

// A party's decision rule: the compliant script plus zero or more edits.
struct Strategy {
    PartyId party;
    std::string label;
    std::vector<Edit> edits;

    bool compliant() const { return edits.empty(); }
};

nlohmann::ordered_json strategy_to_json(const Strategy& strategy);
Strategy strategy_from_json(const nlohmann::json& j);

// Rewrites the protocol script with each party's edits applied: omitted steps
// are dropped, delayed steps rescheduled, extras appended as new steps.
Script apply_strategies(const ProtocolBundle& bundle, const std::vector<Strategy>& strategies);

// The finite deviation catalog for one party: the identity strategy, an omit
// of every scripted step, delays of every claim-like step to each later round
// up to one past the protocol's last deadline, premature reveals for secret
// holders, refund attempts at every round, and claims with to-be-public
// secrets of other parties.
std::vector<Strategy> enumerate_strategies(const ProtocolBundle& bundle, const PartyId& party);

// True iff every secret this party submitted was either self-created or
// already public strictly before the submitting round.
bool no_clairvoyance_check(const PartyId& party,
                           const std::map<std::string, Secret>& own_secrets,
                           const std::vector<TraceEvent>& trace);

bool no_clairvoyance_check(const ProtocolBundle& bundle, const Strategy& strategy,
                           const std::vector<TraceEvent>& trace);

}  // namespace swapsim
