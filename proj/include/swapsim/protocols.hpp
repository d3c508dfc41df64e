#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swapsim/ledger.hpp"

namespace swapsim {

// One scheduled, conditioned submission of a compliant script. The builder
// inspects only the finalized view; returning nullopt means the step's
// prerequisites are not met (the party stops and relies on refunds).
struct ScriptStep {
    std::string name;
    PartyId party;
    Round round = 0;
    ChainId chain;
    // Claim-like steps are the ones deviation delays make sense for.
    bool claim_like = false;
    std::function<std::optional<Action>(const WorldView&)> build;
    // Catalog metadata: the contract the step targets and the label of the
    // party-owned secret it reveals (empty when none or public).
    ContractId target;
    std::string own_secret;
};

struct Script {
    std::vector<ScriptStep> steps;

    Round last_round() const;
    std::vector<std::string> step_names(const PartyId& party) const;
};

// Per-party exact final payoff vectors that count as a completed swap, plus
// the chain the party's principal lives on (for the compensation rule).
struct PartyRole {
    ChainId principal_chain;
    std::vector<std::map<ChainId, AmountDelta>> completed_patterns;
};

struct ContractInfo {
    ContractId id;
    ChainId chain;
    bool is_escrow = true;
    std::vector<std::pair<Hashlock, PartyId>> locks;  // (hashlock, secret owner)
};

// Everything a protocol instance exposes to the runner, the deviation
// catalog, and the explorer.
struct ProtocolBundle {
    std::string name;
    WorldInit world;
    Script script;
    std::vector<PartyId> parties;
    std::vector<ContractInfo> contracts;
    std::map<PartyId, std::map<std::string, Secret>> secrets;  // label -> secret
    std::map<PartyId, PartyRole> roles;
    Round max_deadline = 0;
    Round max_rounds = 16;
};

// The paper's deadline tables, kept in their published units; tests assert
// these literal values.
struct HtlcDeadlines {
    Round alice_escrow = 2;
    Round bob_escrow = 1;
};

struct HtlcParams {
    PartyId alice = "alice";
    PartyId bob = "bob";
    ChainId guilder = "guilder";
    ChainId florin = "florin";
    Amount alice_principal = 100;
    Amount bob_principal = 100;
    HtlcDeadlines deadlines;
    Secret alice_secret;
};

// The two deploys each take an observed round before the commit phase can
// open, so absolute clause deadlines sit two rounds after the table values.
constexpr Round kHtlcCommitPhaseStart = 2;

struct PremiumDeadlines {
    // Step k's effect is final by round k; the six paper steps in order.
    std::array<Round, 6> step{1, 2, 3, 4, 5, 6};
};

struct PremiumParams {
    PartyId alice = "alice";
    PartyId bob = "bob";
    ChainId guilder = "guilder";
    ChainId florin = "florin";
    Amount alice_principal = 100;
    Amount bob_principal = 100;
    std::optional<Amount> premium_a;  // alice -> bob compensation (p_a)
    std::optional<Amount> premium_b;  // bob -> alice compensation (p_b)
    PremiumDeadlines deadlines;
    Secret alice_secret;

    // Omitted premiums resolve to 2% of the principal they protect.
    Amount resolved_premium_a() const { return premium_a ? *premium_a : bob_principal * 2 / 100; }
    Amount resolved_premium_b() const {
        return premium_b ? *premium_b : alice_principal * 2 / 100;
    }
};

struct TransferDeadlines {
    Round ab_alice = 7;
    Round ba_alice = 6;
    Round ca_carol = 9;
    Round ab_carol = 8;
    Round ba_carol = 7;
    Round ac_carol = 7;
};

struct TransferParams {
    PartyId alice = "alice";
    PartyId bob = "bob";
    PartyId carol = "carol";
    ChainId guilder = "guilder";
    ChainId florin = "florin";
    Amount ab_amount = 100;   // alice -> bob, guilder
    Amount ba_amount = 100;   // bob -> alice, florin
    Amount ca_amount = 10;    // carol's payment to alice, florin
    Amount ac_amount = 10;    // alice's extra escrow to carol, guilder
    bool carol_participates = true;
    TransferDeadlines deadlines;
    Secret alice_secret;
    Secret carol_secret;
};

Script script_htlc_swap(const HtlcParams& params);
Script script_premium_swap(const PremiumParams& params);
Script script_naive_transfer(const TransferParams& params);

ProtocolBundle htlc_bundle(const HtlcParams& params, const WorldInit& world);
ProtocolBundle premium_bundle(const PremiumParams& params, const WorldInit& world);
ProtocolBundle transfer_bundle(const TransferParams& params, const WorldInit& world);

struct RunResult {
    World world;
    // Round at which the last contract reached a terminal state (0 when the
    // run created no contracts).
    Round resolution_round = 0;
    bool hit_round_cap = false;
};

// Drives ledger rounds until every contract is terminal and the script is
// exhausted, or the cap is reached. Deterministic: parties act in
// alphabetical order, steps in script order within a party and round.
RunResult run_script(const WorldInit& init, const Script& script, Round max_rounds = 16);

}  // namespace swapsim
