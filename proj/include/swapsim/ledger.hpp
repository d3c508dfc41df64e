#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "swapsim/contracts.hpp"
#include "swapsim/core.hpp"

namespace swapsim {

struct DeployEscrowAction {
    ContractId id;
    PartyId beneficiary;
    Amount amount = 0;
    std::vector<Clause> clauses;
};

struct ClaimAction {
    ContractId id;
    Secret secret;
};

struct RefundAction {
    ContractId id;
};

struct AddClauseAction {
    ContractId id;
    Clause clause;
};

struct PremiumDeployAction {
    ContractId id;
    PremiumSwapParams params;
};

struct PremiumDepositAction {
    ContractId id;
    PremiumLeg leg = PremiumLeg::Premium;
};

struct PremiumRedeemAction {
    ContractId id;
    Secret secret;
};

struct NoopAction {};

using Action = std::variant<DeployEscrowAction, ClaimAction, RefundAction, AddClauseAction,
                            PremiumDeployAction, PremiumDepositAction, PremiumRedeemAction,
                            NoopAction>;

struct SubmittedAction {
    PartyId actor;
    ChainId chain;
    Action action;
    Round submit_round = 0;
};

struct BalanceDelta {
    PartyId party;
    ChainId chain;
    AmountDelta delta = 0;
};

// One event per applied action plus one per automatic timeout settlement.
// Rejected actions are traced, never silently dropped. `round` is the round
// from which the effect is visible (the boundary's new round).
struct TraceEvent {
    Round round = 0;
    PartyId actor;
    ChainId chain;
    nlohmann::ordered_json action;
    nlohmann::ordered_json result;
    std::vector<BalanceDelta> deltas;
};

nlohmann::ordered_json trace_event_json(const TraceEvent& event);
std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);

using ContractState = std::variant<EscrowContract, PremiumSwapContract>;

bool contract_terminal(const ContractState& c);
Amount contract_custody(const ContractState& c);
std::string contract_phase(const ContractState& c);

struct Ledger {
    std::map<PartyId, Amount> balances;
    std::map<ContractId, ContractState> contracts;
};

struct WorldInit {
    struct ChainInit {
        ChainId name;
        std::vector<std::pair<PartyId, Amount>> balances;
    };
    std::vector<ChainInit> chains;
};

// The simulated multi-chain world. Submitted actions sit in a pending queue
// until advance_round applies them, in submission order, at the boundary;
// reads expose only state finalized at or before the last boundary.
class World {
public:
    static World create(const WorldInit& init);

    Round round() const { return round_; }

    // Queues an action for the upcoming boundary. Throws on unknown
    // actor/chain; per-action failures surface later as rejected trace events.
    void submit(const PartyId& actor, const ChainId& chain, Action action);

    // Applies pending actions in submission order, fires contract timeouts
    // whose deadline has been reached, and increments the round.
    void advance_round();

    const Ledger& read(const ChainId& chain) const;
    bool has_chain(const ChainId& chain) const { return chains_.count(chain) > 0; }
    bool has_party(const PartyId& party) const { return parties_.count(party) > 0; }
    const std::set<PartyId>& parties() const { return parties_; }
    const std::map<ChainId, Ledger>& chains() const { return chains_; }

    const ContractState* find_contract(const ChainId& chain, const ContractId& id) const;
    bool all_contracts_terminal() const;

    // A secret is public from the round its carrying transaction landed.
    std::optional<Secret> public_secret(const Hashlock& lock) const;
    std::optional<Round> publication_round(const Hashlock& lock) const;

    const std::vector<TraceEvent>& trace() const { return trace_; }
    std::size_t pending_count() const { return pending_.size(); }

    Amount chain_supply(const ChainId& chain) const;

private:
    void apply_action(const SubmittedAction& submitted);
    void publish_secret(const Secret& secret, Round round);
    void check_conservation() const;

    Round round_ = 0;
    std::set<PartyId> parties_;
    std::map<ChainId, Ledger> chains_;
    std::map<ChainId, Amount> initial_supply_;
    std::vector<SubmittedAction> pending_;
    std::vector<TraceEvent> trace_;
    std::map<Hashlock, std::pair<Secret, Round>> revealed_;
};

// Read-only window scripts are allowed to consult: finalized chain state and
// published secrets, never the pending queue.
class WorldView {
public:
    explicit WorldView(const World& world) : world_(world) {}

    Round round() const { return world_.round(); }
    const Ledger& read(const ChainId& chain) const { return world_.read(chain); }
    const ContractState* find_contract(const ChainId& chain, const ContractId& id) const {
        return world_.find_contract(chain, id);
    }
    std::optional<Secret> public_secret(const Hashlock& lock) const {
        return world_.public_secret(lock);
    }

private:
    const World& world_;
};

}  // namespace swapsim
