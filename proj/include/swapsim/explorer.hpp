#pragma once

#include <map>
#include <string>
#include <vector>

#include "swapsim/adversary.hpp"
#include "swapsim/protocols.hpp"

namespace swapsim {

using Valuation = std::map<ChainId, AmountDelta>;

Valuation unit_valuation(const WorldInit& world);

// Signed balance change per (party, chain) between two worlds sharing a
// scenario; requires every contract in the final world to be terminal.
struct Payoff {
    std::map<PartyId, std::map<ChainId, AmountDelta>> deltas;

    AmountDelta net(const PartyId& party, const Valuation& valuation) const;
    nlohmann::ordered_json to_json() const;
};

Payoff payoffs(const World& initial_world, const World& final_world);

enum class Outcome { SwapCompleted, MadeWholeRefund, CompensatedAsVictim, Loss };

std::string outcome_name(Outcome outcome);

struct Classification {
    Outcome outcome = Outcome::Loss;
    AmountDelta compensation = 0;  // net gain when CompensatedAsVictim
    std::string details;
};

// Verdict rules for a compliant party, in order:
//   all deltas zero                                  -> MadeWholeRefund
//   exact match of a completed pattern for its role  -> SwapCompleted
//   principal chain intact and positive net value    -> CompensatedAsVictim
//   anything else                                    -> Loss
Classification classify_party(const Payoff& payoff, const PartyId& party, const PartyRole& role,
                              const Valuation& valuation);

struct RunVerdict {
    std::vector<Strategy> strategies;
    Payoff payoff;
    std::map<PartyId, Classification> classifications;  // compliant parties only
    Round resolution_round = 0;
    std::map<PartyId, Round> lockup_rounds;  // longest own-deposit custody
    bool round_cap_hit = false;
    std::vector<TraceEvent> trace;
};

RunVerdict run_with_strategies(const ProtocolBundle& bundle,
                               const std::vector<Strategy>& strategies,
                               const Valuation& valuation);

struct Counterexample {
    PartyId victim;
    nlohmann::ordered_json strategies;  // replayable strategy records
    nlohmann::ordered_json payoff;
    std::string details;
};

struct SafetyReport {
    std::string protocol;
    std::vector<PartyId> deviating;
    std::map<PartyId, std::size_t> catalog_sizes;
    std::size_t runs = 0;
    std::size_t unverdicted_runs = 0;  // no compliant party left to classify
    std::map<std::string, std::size_t> classification_counts;
    std::vector<Counterexample> counterexamples;  // empty iff zero Loss
    std::map<PartyId, Round> max_lockup;          // compliant parties

    std::size_t loss_count() const;
    nlohmann::ordered_json to_json() const;
};

// Runs the Cartesian product of the deviating parties' catalogs against
// compliant scripts for everyone else, in catalog order.
SafetyReport explore(const ProtocolBundle& bundle, const std::vector<PartyId>& deviating,
                     const Valuation& valuation);

struct TransferMetrics {
    Round rounds_with_carol = 0;
    Round rounds_without_carol = 0;
    Round extra_rounds = 0;
    AmountDelta alice_peak_escrow_with = 0;
    AmountDelta alice_peak_escrow_without = 0;
    std::vector<Round> alice_action_rounds_after_entry;  // submissions past round 2

    nlohmann::ordered_json to_json() const;
};

// Compares the naive transfer protocol with and without Carol showing up.
TransferMetrics transfer_metrics(const TransferParams& params, const WorldInit& world,
                                 const Valuation& valuation);

}  // namespace swapsim
