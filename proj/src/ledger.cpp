#include "swapsim/ledger.hpp"

#include <sstream>

namespace swapsim {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json clause_json(const Clause& clause) {
    ordered_json j;
    j["owner"] = clause.owner_label;
    j["lock"] = to_hex(clause.lock);
    j["deadline"] = clause.deadline;
    if (clause.recipient) j["recipient"] = *clause.recipient;
    return j;
}

ordered_json action_json(const Action& action, Round submit_round) {
    ordered_json j;
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DeployEscrowAction>) {
                j["type"] = "deploy_escrow";
                j["contract"] = a.id;
                j["beneficiary"] = a.beneficiary;
                j["amount"] = a.amount;
                ordered_json clauses = ordered_json::array();
                for (const Clause& c : a.clauses) clauses.push_back(clause_json(c));
                j["clauses"] = clauses;
            } else if constexpr (std::is_same_v<T, ClaimAction>) {
                j["type"] = "claim";
                j["contract"] = a.id;
                j["secret"] = to_hex(a.secret);
            } else if constexpr (std::is_same_v<T, RefundAction>) {
                j["type"] = "refund";
                j["contract"] = a.id;
            } else if constexpr (std::is_same_v<T, AddClauseAction>) {
                j["type"] = "add_clause";
                j["contract"] = a.id;
                j["clause"] = clause_json(a.clause);
            } else if constexpr (std::is_same_v<T, PremiumDeployAction>) {
                j["type"] = "premium_deploy";
                j["contract"] = a.id;
                j["premium_payer"] = a.params.premium_payer;
                j["premium_amount"] = a.params.premium_amount;
                j["principal_payer"] = a.params.principal_payer;
                j["principal_amount"] = a.params.principal_amount;
                j["principal_beneficiary"] = a.params.principal_beneficiary;
                j["lock"] = to_hex(a.params.lock);
                j["premium_deadline"] = a.params.premium_deadline;
                j["principal_deadline"] = a.params.principal_deadline;
                j["redeem_deadline"] = a.params.redeem_deadline;
            } else if constexpr (std::is_same_v<T, PremiumDepositAction>) {
                j["type"] = "premium_deposit";
                j["contract"] = a.id;
                j["leg"] = a.leg == PremiumLeg::Premium ? "premium" : "principal";
            } else if constexpr (std::is_same_v<T, PremiumRedeemAction>) {
                j["type"] = "premium_redeem";
                j["contract"] = a.id;
                j["secret"] = to_hex(a.secret);
            } else if constexpr (std::is_same_v<T, NoopAction>) {
                j["type"] = "noop";
            }
        },
        action);
    j["submit_round"] = submit_round;
    return j;
}

ordered_json accepted_result() {
    ordered_json j;
    j["status"] = "accepted";
    return j;
}

ordered_json rejected_result(const std::string& reason) {
    ordered_json j;
    j["status"] = "rejected";
    j["reason"] = reason;
    return j;
}

}  // namespace

ordered_json trace_event_json(const TraceEvent& event) {
    ordered_json j;
    j["round"] = event.round;
    j["actor"] = event.actor;
    j["chain"] = event.chain;
    j["action"] = event.action;
    j["result"] = event.result;
    ordered_json deltas = ordered_json::array();
    for (const BalanceDelta& d : event.deltas) {
        ordered_json dj;
        dj["party"] = d.party;
        dj["chain"] = d.chain;
        dj["delta"] = d.delta;
        deltas.push_back(dj);
    }
    j["deltas"] = deltas;
    return j;
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace) {
    std::ostringstream out;
    for (const TraceEvent& event : trace) {
        out << trace_event_json(event).dump() << '\n';
    }
    return out.str();
}

bool contract_terminal(const ContractState& c) {
    return std::visit([](const auto& state) { return state.terminal(); }, c);
}

Amount contract_custody(const ContractState& c) {
    return std::visit([](const auto& state) { return state.custody(); }, c);
}

std::string contract_phase(const ContractState& c) {
    return std::visit([](const auto& state) { return state.phase_string(); }, c);
}

World World::create(const WorldInit& init) {
    if (init.chains.empty()) {
        throw std::invalid_argument("world: no chains");
    }
    World w;
    for (const auto& chain : init.chains) {
        if (chain.name.empty()) {
            throw std::invalid_argument("world: empty chain name");
        }
        if (w.chains_.count(chain.name)) {
            throw std::invalid_argument("world: duplicate chain name: " + chain.name);
        }
        Ledger ledger;
        Amount supply = 0;
        for (const auto& [party, amount] : chain.balances) {
            if (party.empty()) {
                throw std::invalid_argument("world: empty party name");
            }
            if (ledger.balances.count(party)) {
                throw std::invalid_argument("world: duplicate party " + party + " on chain " +
                                            chain.name);
            }
            ledger.balances[party] = amount;
            supply = add_amount(supply, amount);
            w.parties_.insert(party);
        }
        w.chains_[chain.name] = std::move(ledger);
        w.initial_supply_[chain.name] = supply;
    }
    return w;
}

void World::submit(const PartyId& actor, const ChainId& chain, Action action) {
    if (!has_party(actor)) {
        throw std::invalid_argument("submit: unknown actor: " + actor);
    }
    if (!has_chain(chain)) {
        throw std::invalid_argument("submit: unknown chain: " + chain);
    }
    pending_.push_back(SubmittedAction{actor, chain, std::move(action), round_});
}

const Ledger& World::read(const ChainId& chain) const {
    auto it = chains_.find(chain);
    if (it == chains_.end()) {
        throw std::invalid_argument("read: unknown chain: " + chain);
    }
    return it->second;
}

const ContractState* World::find_contract(const ChainId& chain, const ContractId& id) const {
    auto chain_it = chains_.find(chain);
    if (chain_it == chains_.end()) return nullptr;
    auto it = chain_it->second.contracts.find(id);
    if (it == chain_it->second.contracts.end()) return nullptr;
    return &it->second;
}

bool World::all_contracts_terminal() const {
    for (const auto& [name, ledger] : chains_) {
        for (const auto& [id, contract] : ledger.contracts) {
            if (!contract_terminal(contract)) return false;
        }
    }
    return true;
}

std::optional<Secret> World::public_secret(const Hashlock& lock) const {
    auto it = revealed_.find(lock);
    if (it == revealed_.end() || it->second.second > round_) return std::nullopt;
    return it->second.first;
}

std::optional<Round> World::publication_round(const Hashlock& lock) const {
    auto it = revealed_.find(lock);
    if (it == revealed_.end()) return std::nullopt;
    return it->second.second;
}

Amount World::chain_supply(const ChainId& chain) const {
    const Ledger& ledger = read(chain);
    Amount total = 0;
    for (const auto& [party, balance] : ledger.balances) {
        total = add_amount(total, balance);
    }
    for (const auto& [id, contract] : ledger.contracts) {
        total = add_amount(total, contract_custody(contract));
    }
    return total;
}

void World::publish_secret(const Secret& secret, Round round) {
    Hashlock lock = hashlock(secret);
    if (!revealed_.count(lock)) {
        revealed_[lock] = {secret, round};
    }
}

void World::advance_round() {
    const Round new_round = round_ + 1;
    std::vector<SubmittedAction> batch;
    batch.swap(pending_);
    for (const SubmittedAction& submitted : batch) {
        apply_action(submitted);
    }
    // Timeout settlements fire after the round's transactions, so a claim
    // submitted in the deadline's previous round still wins.
    for (auto& [chain_name, ledger] : chains_) {
        for (auto& [id, contract] : ledger.contracts) {
            std::optional<TransitionResult> fired = std::visit(
                [&](auto& state) { return state.on_round(new_round); }, contract);
            if (!fired) continue;
            TraceEvent event;
            event.round = new_round;
            event.actor = "system";
            event.chain = chain_name;
            event.action = ordered_json{{"type", "timeout_settlement"}, {"contract", id}};
            ordered_json result = accepted_result();
            result["contract"] = id;
            result["phase"] = contract_phase(contract);
            event.result = result;
            for (const Credit& credit : fired->credits) {
                ledger.balances[credit.party] =
                    add_amount(ledger.balances[credit.party], credit.amount);
                event.deltas.push_back(
                    {credit.party, chain_name, static_cast<AmountDelta>(credit.amount)});
            }
            trace_.push_back(std::move(event));
        }
    }
    round_ = new_round;
    check_conservation();
}

void World::apply_action(const SubmittedAction& submitted) {
    const Round new_round = round_ + 1;
    Ledger& ledger = chains_.at(submitted.chain);

    TraceEvent event;
    event.round = new_round;
    event.actor = submitted.actor;
    event.chain = submitted.chain;
    event.action = action_json(submitted.action, submitted.submit_round);

    auto credit_all = [&](const std::vector<Credit>& credits) {
        for (const Credit& credit : credits) {
            ledger.balances[credit.party] =
                add_amount(ledger.balances[credit.party], credit.amount);
            event.deltas.push_back(
                {credit.party, submitted.chain, static_cast<AmountDelta>(credit.amount)});
        }
    };
    auto reject = [&](const std::string& reason) { event.result = rejected_result(reason); };

    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DeployEscrowAction>) {
                if (a.id.empty()) {
                    reject("empty contract id");
                } else if (ledger.contracts.count(a.id)) {
                    reject("contract id already exists");
                } else if (a.clauses.empty()) {
                    reject("empty clause list");
                } else if (std::any_of(a.clauses.begin(), a.clauses.end(),
                                       [](const Clause& c) { return c.deadline == 0; })) {
                    reject("clause deadline must be positive");
                } else if (ledger.balances[submitted.actor] < a.amount) {
                    reject("insufficient balance");
                } else {
                    ledger.balances[submitted.actor] =
                        sub_amount(ledger.balances[submitted.actor], a.amount);
                    EscrowContract contract;
                    contract.id = a.id;
                    contract.chain = submitted.chain;
                    contract.depositor = submitted.actor;
                    contract.beneficiary = a.beneficiary;
                    contract.amount = a.amount;
                    contract.clauses = a.clauses;
                    ledger.contracts[a.id] = contract;
                    ordered_json result = accepted_result();
                    result["contract"] = a.id;
                    result["phase"] = "Live";
                    event.result = result;
                    event.deltas.push_back({submitted.actor, submitted.chain,
                                            -static_cast<AmountDelta>(a.amount)});
                }
            } else if constexpr (std::is_same_v<T, ClaimAction>) {
                // Any claim transaction exposes its secret on-chain, accepted
                // or not; this is how counterparties learn hashkeys.
                publish_secret(a.secret, new_round);
                auto it = ledger.contracts.find(a.id);
                if (it == ledger.contracts.end()) {
                    reject("no such contract");
                } else if (auto* escrow = std::get_if<EscrowContract>(&it->second)) {
                    TransitionResult r = escrow->try_claim(a.secret, submitted.submit_round);
                    if (r.accepted) {
                        ordered_json result = accepted_result();
                        result["contract"] = a.id;
                        result["phase"] = escrow->phase_string();
                        result["clause"] = *r.clause_index;
                        result["recipient"] = r.credits.front().party;
                        event.result = result;
                        credit_all(r.credits);
                    } else {
                        reject(r.reason);
                    }
                } else {
                    reject("not an escrow contract");
                }
            } else if constexpr (std::is_same_v<T, RefundAction>) {
                auto it = ledger.contracts.find(a.id);
                if (it == ledger.contracts.end()) {
                    reject("no such contract");
                } else if (auto* escrow = std::get_if<EscrowContract>(&it->second)) {
                    TransitionResult r = escrow->try_refund(submitted.submit_round);
                    if (r.accepted) {
                        ordered_json result = accepted_result();
                        result["contract"] = a.id;
                        result["phase"] = escrow->phase_string();
                        event.result = result;
                        credit_all(r.credits);
                    } else {
                        reject(r.reason);
                    }
                } else {
                    reject("not an escrow contract");
                }
            } else if constexpr (std::is_same_v<T, AddClauseAction>) {
                auto it = ledger.contracts.find(a.id);
                if (it == ledger.contracts.end()) {
                    reject("no such contract");
                } else if (auto* escrow = std::get_if<EscrowContract>(&it->second)) {
                    TransitionResult r = escrow->try_add_clause(submitted.actor, a.clause);
                    if (r.accepted) {
                        ordered_json result = accepted_result();
                        result["contract"] = a.id;
                        result["clause"] = *r.clause_index;
                        result["refund_deadline"] = escrow->refund_deadline();
                        event.result = result;
                    } else {
                        reject(r.reason);
                    }
                } else {
                    reject("not an escrow contract");
                }
            } else if constexpr (std::is_same_v<T, PremiumDeployAction>) {
                if (a.id.empty()) {
                    reject("empty contract id");
                } else if (ledger.contracts.count(a.id)) {
                    reject("contract id already exists");
                } else if (!a.params.deadlines_ordered()) {
                    reject("deadlines must satisfy premium < principal < redeem");
                } else {
                    PremiumSwapContract contract;
                    contract.id = a.id;
                    contract.chain = submitted.chain;
                    contract.params = a.params;
                    ledger.contracts[a.id] = contract;
                    ordered_json result = accepted_result();
                    result["contract"] = a.id;
                    result["phase"] = contract.phase_string();
                    event.result = result;
                }
            } else if constexpr (std::is_same_v<T, PremiumDepositAction>) {
                auto it = ledger.contracts.find(a.id);
                if (it == ledger.contracts.end()) {
                    reject("no such contract");
                } else if (auto* swap = std::get_if<PremiumSwapContract>(&it->second)) {
                    Amount required = a.leg == PremiumLeg::Premium
                                          ? swap->params.premium_amount
                                          : swap->params.principal_amount;
                    if (ledger.balances[submitted.actor] < required) {
                        reject("insufficient balance");
                    } else {
                        Amount debit = 0;
                        TransitionResult r =
                            swap->try_deposit(a.leg, submitted.actor, submitted.submit_round,
                                              &debit);
                        if (r.accepted) {
                            ledger.balances[submitted.actor] =
                                sub_amount(ledger.balances[submitted.actor], debit);
                            ordered_json result = accepted_result();
                            result["contract"] = a.id;
                            result["phase"] = swap->phase_string();
                            event.result = result;
                            event.deltas.push_back({submitted.actor, submitted.chain,
                                                    -static_cast<AmountDelta>(debit)});
                        } else {
                            reject(r.reason);
                        }
                    }
                } else {
                    reject("not a premium swap contract");
                }
            } else if constexpr (std::is_same_v<T, PremiumRedeemAction>) {
                publish_secret(a.secret, new_round);
                auto it = ledger.contracts.find(a.id);
                if (it == ledger.contracts.end()) {
                    reject("no such contract");
                } else if (auto* swap = std::get_if<PremiumSwapContract>(&it->second)) {
                    TransitionResult r = swap->try_redeem(a.secret, submitted.submit_round);
                    if (r.accepted) {
                        ordered_json result = accepted_result();
                        result["contract"] = a.id;
                        result["phase"] = swap->phase_string();
                        event.result = result;
                        credit_all(r.credits);
                    } else {
                        reject(r.reason);
                    }
                } else {
                    reject("not a premium swap contract");
                }
            } else if constexpr (std::is_same_v<T, NoopAction>) {
                event.result = accepted_result();
            }
        },
        submitted.action);

    trace_.push_back(std::move(event));
}

void World::check_conservation() const {
    for (const auto& [name, supply] : initial_supply_) {
        if (chain_supply(name) != supply) {
            throw std::logic_error("conservation violated on chain " + name);
        }
    }
}

}  // namespace swapsim
