#include "swapsim/explorer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace swapsim {

namespace {

using ordered_json = nlohmann::ordered_json;

bool phase_terminal(const std::string& phase) {
    return phase == "Claimed" || phase == "Refunded" || phase.rfind("Settled", 0) == 0;
}

// Custody intervals per depositing party, read back from the trace.
struct CustodyInterval {
    PartyId party;
    ChainId chain;
    Round start = 0;
    Round end = 0;
    Amount amount = 0;
};

std::vector<CustodyInterval> custody_intervals(const std::vector<TraceEvent>& trace) {
    std::map<std::pair<ChainId, ContractId>, Round> terminal_round;
    for (const TraceEvent& event : trace) {
        if (!event.result.contains("phase") || !event.result.contains("contract")) continue;
        if (!phase_terminal(event.result["phase"].get<std::string>())) continue;
        std::pair<ChainId, ContractId> key{event.chain,
                                           event.result["contract"].get<std::string>()};
        if (!terminal_round.count(key)) terminal_round[key] = event.round;
    }
    std::vector<CustodyInterval> intervals;
    for (const TraceEvent& event : trace) {
        if (event.result.value("status", "") != "accepted") continue;
        const std::string type = event.action.value("type", "");
        Amount amount = 0;
        if (type == "deploy_escrow") {
            amount = event.action["amount"].get<Amount>();
        } else if (type == "premium_deposit") {
            for (const BalanceDelta& d : event.deltas) {
                if (d.party == event.actor && d.delta < 0) {
                    amount = static_cast<Amount>(-d.delta);
                }
            }
        } else {
            continue;
        }
        std::pair<ChainId, ContractId> key{event.chain,
                                           event.action["contract"].get<std::string>()};
        auto it = terminal_round.find(key);
        const Round end = it != terminal_round.end() ? it->second : event.round;
        intervals.push_back({event.actor, event.chain, event.round, end, amount});
    }
    return intervals;
}

std::map<PartyId, Round> lockup_from_trace(const std::vector<TraceEvent>& trace) {
    std::map<PartyId, Round> lockup;
    for (const CustodyInterval& interval : custody_intervals(trace)) {
        const Round held = interval.end >= interval.start ? interval.end - interval.start : 0;
        auto [it, inserted] = lockup.try_emplace(interval.party, held);
        if (!inserted) it->second = std::max(it->second, held);
    }
    return lockup;
}

AmountDelta peak_escrow(const std::vector<TraceEvent>& trace, const PartyId& party,
                        const Valuation& valuation) {
    std::vector<CustodyInterval> intervals;
    Round horizon = 0;
    for (const CustodyInterval& interval : custody_intervals(trace)) {
        if (interval.party != party) continue;
        intervals.push_back(interval);
        horizon = std::max(horizon, interval.end);
    }
    AmountDelta peak = 0;
    for (Round r = 0; r <= horizon; ++r) {
        AmountDelta held = 0;
        for (const CustodyInterval& interval : intervals) {
            if (interval.start <= r && r < interval.end) {
                AmountDelta unit = 1;
                auto it = valuation.find(interval.chain);
                if (it != valuation.end()) unit = it->second;
                held += static_cast<AmountDelta>(interval.amount) * unit;
            }
        }
        peak = std::max(peak, held);
    }
    return peak;
}

}  // namespace

Valuation unit_valuation(const WorldInit& world) {
    Valuation v;
    for (const auto& chain : world.chains) v[chain.name] = 1;
    return v;
}

AmountDelta Payoff::net(const PartyId& party, const Valuation& valuation) const {
    auto it = deltas.find(party);
    if (it == deltas.end()) return 0;
    AmountDelta total = 0;
    for (const auto& [chain, delta] : it->second) {
        AmountDelta unit = 1;
        auto vit = valuation.find(chain);
        if (vit != valuation.end()) unit = vit->second;
        total += delta * unit;
    }
    return total;
}

ordered_json Payoff::to_json() const {
    ordered_json j;
    for (const auto& [party, row] : deltas) {
        ordered_json row_json;
        for (const auto& [chain, delta] : row) row_json[chain] = delta;
        j[party] = row_json;
    }
    return j;
}

Payoff payoffs(const World& initial_world, const World& final_world) {
    if (!final_world.all_contracts_terminal()) {
        throw std::invalid_argument("payoffs: non-terminal contracts remain");
    }
    Payoff payoff;
    for (const PartyId& party : initial_world.parties()) {
        for (const auto& [chain_name, ledger] : initial_world.chains()) {
            auto initial_it = ledger.balances.find(party);
            const Amount before = initial_it != ledger.balances.end() ? initial_it->second : 0;
            const Ledger& final_ledger = final_world.read(chain_name);
            auto final_it = final_ledger.balances.find(party);
            const Amount after = final_it != final_ledger.balances.end() ? final_it->second : 0;
            payoff.deltas[party][chain_name] = delta_of(after, before);
        }
    }
    return payoff;
}

std::string outcome_name(Outcome outcome) {
    switch (outcome) {
        case Outcome::SwapCompleted: return "SwapCompleted";
        case Outcome::MadeWholeRefund: return "MadeWholeRefund";
        case Outcome::CompensatedAsVictim: return "CompensatedAsVictim";
        case Outcome::Loss: return "LOSS";
    }
    return "LOSS";
}

Classification classify_party(const Payoff& payoff, const PartyId& party, const PartyRole& role,
                              const Valuation& valuation) {
    auto it = payoff.deltas.find(party);
    std::map<ChainId, AmountDelta> row;
    if (it != payoff.deltas.end()) row = it->second;

    bool all_zero = true;
    for (const auto& [chain, delta] : row) {
        if (delta != 0) all_zero = false;
    }
    if (all_zero) {
        return {Outcome::MadeWholeRefund, 0, ""};
    }

    for (const auto& pattern : role.completed_patterns) {
        bool match = true;
        for (const auto& [chain, delta] : row) {
            auto pit = pattern.find(chain);
            const AmountDelta expected = pit != pattern.end() ? pit->second : 0;
            if (delta != expected) {
                match = false;
                break;
            }
        }
        if (match) {
            return {Outcome::SwapCompleted, 0, ""};
        }
    }

    const AmountDelta net = payoff.net(party, valuation);
    auto principal_it = row.find(role.principal_chain);
    const AmountDelta principal_delta = principal_it != row.end() ? principal_it->second : 0;
    if (principal_delta >= 0 && net > 0) {
        return {Outcome::CompensatedAsVictim, net, ""};
    }

    std::ostringstream details;
    details << "net " << net << ";";
    for (const auto& [chain, delta] : row) {
        details << " " << chain << ": " << delta;
    }
    return {Outcome::Loss, 0, details.str()};
}

RunVerdict run_with_strategies(const ProtocolBundle& bundle,
                               const std::vector<Strategy>& strategies,
                               const Valuation& valuation) {
    RunVerdict verdict;
    verdict.strategies = strategies;

    const Script script = apply_strategies(bundle, strategies);
    const World initial = World::create(bundle.world);
    RunResult run = run_script(bundle.world, script, bundle.max_rounds);
    verdict.resolution_round = run.resolution_round;
    verdict.round_cap_hit = run.hit_round_cap;
    verdict.payoff = payoffs(initial, run.world);
    verdict.lockup_rounds = lockup_from_trace(run.world.trace());
    verdict.trace = run.world.trace();

    std::set<PartyId> deviating;
    for (const Strategy& s : strategies) deviating.insert(s.party);
    for (const PartyId& party : bundle.parties) {
        if (deviating.count(party)) continue;
        auto role_it = bundle.roles.find(party);
        if (role_it == bundle.roles.end()) continue;
        verdict.classifications[party] =
            classify_party(verdict.payoff, party, role_it->second, valuation);
    }
    return verdict;
}

std::size_t SafetyReport::loss_count() const {
    auto it = classification_counts.find("LOSS");
    return it != classification_counts.end() ? it->second : 0;
}

ordered_json SafetyReport::to_json() const {
    ordered_json j;
    j["protocol"] = protocol;
    j["deviating"] = deviating;
    ordered_json sizes;
    for (const auto& [party, size] : catalog_sizes) sizes[party] = size;
    j["catalog_sizes"] = sizes;
    j["runs"] = runs;
    j["unverdicted_runs"] = unverdicted_runs;
    ordered_json counts;
    for (const auto& [label, count] : classification_counts) counts[label] = count;
    j["classifications"] = counts;
    ordered_json lockup;
    for (const auto& [party, rounds] : max_lockup) lockup[party] = rounds;
    j["lockup"] = lockup;
    ordered_json cxs = ordered_json::array();
    for (const Counterexample& cx : counterexamples) {
        ordered_json c;
        c["victim"] = cx.victim;
        c["strategies"] = cx.strategies;
        c["payoff"] = cx.payoff;
        c["details"] = cx.details;
        cxs.push_back(c);
    }
    j["counterexamples"] = cxs;
    return j;
}

SafetyReport explore(const ProtocolBundle& bundle, const std::vector<PartyId>& deviating,
                     const Valuation& valuation) {
    SafetyReport report;
    report.protocol = bundle.name;
    report.deviating = deviating;
    for (const PartyId& party : deviating) {
        if (std::find(bundle.parties.begin(), bundle.parties.end(), party) ==
            bundle.parties.end()) {
            throw std::invalid_argument("explore: unknown party " + party);
        }
    }

    std::vector<std::vector<Strategy>> catalogs;
    for (const PartyId& party : deviating) {
        catalogs.push_back(enumerate_strategies(bundle, party));
        report.catalog_sizes[party] = catalogs.back().size();
    }

    std::vector<std::size_t> odometer(catalogs.size(), 0);
    bool done = catalogs.empty();
    while (!done) {
        std::vector<Strategy> combo;
        for (std::size_t i = 0; i < catalogs.size(); ++i) {
            combo.push_back(catalogs[i][odometer[i]]);
        }
        RunVerdict verdict = run_with_strategies(bundle, combo, valuation);
        report.runs += 1;
        if (verdict.classifications.empty()) {
            report.unverdicted_runs += 1;
        }
        for (const auto& [party, cls] : verdict.classifications) {
            report.classification_counts[outcome_name(cls.outcome)] += 1;
            if (cls.outcome == Outcome::Loss) {
                Counterexample cx;
                cx.victim = party;
                ordered_json strategies = ordered_json::array();
                for (const Strategy& s : combo) strategies.push_back(strategy_to_json(s));
                cx.strategies = strategies;
                cx.payoff = verdict.payoff.to_json();
                cx.details = cls.details;
                report.counterexamples.push_back(std::move(cx));
            }
            auto lockup_it = verdict.lockup_rounds.find(party);
            if (lockup_it != verdict.lockup_rounds.end()) {
                auto [it, inserted] = report.max_lockup.try_emplace(party, lockup_it->second);
                if (!inserted) it->second = std::max(it->second, lockup_it->second);
            }
        }

        std::size_t i = 0;
        for (; i < odometer.size(); ++i) {
            odometer[i] += 1;
            if (odometer[i] < catalogs[i].size()) break;
            odometer[i] = 0;
        }
        if (i == odometer.size()) done = true;
    }
    return report;
}

ordered_json TransferMetrics::to_json() const {
    ordered_json j;
    j["rounds_with_carol"] = rounds_with_carol;
    j["rounds_without_carol"] = rounds_without_carol;
    j["extra_rounds"] = extra_rounds;
    j["alice_peak_escrow_with_carol"] = alice_peak_escrow_with;
    j["alice_peak_escrow_without_carol"] = alice_peak_escrow_without;
    j["alice_action_rounds_after_entry"] = alice_action_rounds_after_entry;
    return j;
}

TransferMetrics transfer_metrics(const TransferParams& params, const WorldInit& world,
                                 const Valuation& valuation) {
    TransferParams with = params;
    with.carol_participates = true;
    TransferParams without = params;
    without.carol_participates = false;

    const ProtocolBundle bundle_with = transfer_bundle(with, world);
    const ProtocolBundle bundle_without = transfer_bundle(without, world);
    RunResult run_with = run_script(world, bundle_with.script, bundle_with.max_rounds);
    RunResult run_without = run_script(world, bundle_without.script, bundle_without.max_rounds);

    TransferMetrics metrics;
    metrics.rounds_with_carol = run_with.resolution_round;
    metrics.rounds_without_carol = run_without.resolution_round;
    metrics.extra_rounds = metrics.rounds_with_carol - metrics.rounds_without_carol;
    metrics.alice_peak_escrow_with = peak_escrow(run_with.world.trace(), params.alice, valuation);
    metrics.alice_peak_escrow_without =
        peak_escrow(run_without.world.trace(), params.alice, valuation);

    std::set<Round> rounds;
    for (const TraceEvent& event : run_with.world.trace()) {
        if (event.actor != params.alice || !event.action.contains("submit_round")) continue;
        const Round r = event.action["submit_round"].get<Round>();
        if (r > 2) rounds.insert(r);
    }
    metrics.alice_action_rounds_after_entry.assign(rounds.begin(), rounds.end());
    return metrics;
}

}  // namespace swapsim
