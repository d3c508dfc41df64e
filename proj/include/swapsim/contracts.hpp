#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swapsim/core.hpp"

namespace swapsim {

// One way to release an escrowed asset: a matching secret presented before
// the deadline. `recipient` overrides the escrow's beneficiary for this
// clause (used when a position has been transferred to a third party).
struct Clause {
    PartyId owner_label;  // the secret's creator, for readability
    Hashlock lock;
    Round deadline = 0;
    std::optional<PartyId> recipient;

    bool operator==(const Clause&) const = default;
};

// A party credited on the contract's chain when custody is released.
struct Credit {
    PartyId party;
    Amount amount = 0;
};

struct TransitionResult {
    bool accepted = false;
    std::string reason;             // set when rejected
    std::vector<Credit> credits;    // funds leaving custody
    std::optional<std::size_t> clause_index;
};

enum class EscrowState { Live, Claimed, Refunded };

// Generalized hashlocked escrow: custody of `amount`, released to a clause
// recipient on a timely matching secret, else refunded to the depositor at
// the refund deadline (the maximum clause deadline).
struct EscrowContract {
    ContractId id;
    ChainId chain;
    PartyId depositor;
    PartyId beneficiary;
    Amount amount = 0;
    std::vector<Clause> clauses;
    EscrowState state = EscrowState::Live;
    std::optional<std::size_t> claimed_clause;

    Round refund_deadline() const;
    bool terminal() const { return state != EscrowState::Live; }
    Amount custody() const { return terminal() ? 0 : amount; }
    std::string phase_string() const;

    TransitionResult try_claim(const Secret& secret, Round submit_round);
    TransitionResult try_refund(Round submit_round);
    TransitionResult try_add_clause(const PartyId& caller, const Clause& clause);
    // Fires the refund rule when the boundary enters `new_round` past the
    // refund deadline. Empty result if nothing fires.
    std::optional<TransitionResult> on_round(Round new_round);
};

enum class PremiumPhase {
    AwaitPremium,
    AwaitPrincipal,
    AwaitRedeem,
    SettledComplete,
    SettledPrincipalRefundPremiumForfeit,
    SettledPremiumRefund,
    SettledPrincipalRefundPremiumRefund,
};

std::string premium_phase_string(PremiumPhase phase);

struct PremiumSwapParams {
    PartyId premium_payer;
    Amount premium_amount = 0;
    PartyId principal_payer;
    Amount principal_amount = 0;
    PartyId principal_beneficiary;
    Hashlock lock;
    Round premium_deadline = 0;
    Round principal_deadline = 0;
    Round redeem_deadline = 0;

    bool deadlines_ordered() const {
        return premium_deadline < principal_deadline &&
               principal_deadline < redeem_deadline;
    }

    bool operator==(const PremiumSwapParams&) const = default;
};

enum class PremiumLeg { Premium, Principal };

// Composite two-deposit contract: holds one party's premium and the other's
// principal, with conditional disposition.
//   - principal never deposited by its deadline: premium refunds to its payer;
//   - principal deposited but not redeemed by the redeem deadline: principal
//     refunds to its payer and the premium is paid to the principal payer;
//   - timely redeem with the matching secret: principal to the beneficiary,
//     premium refunds to its payer.
struct PremiumSwapContract {
    ContractId id;
    ChainId chain;
    PremiumSwapParams params;
    bool premium_in = false;
    bool principal_in = false;
    PremiumPhase phase = PremiumPhase::AwaitPremium;

    bool terminal() const { return phase != PremiumPhase::AwaitPremium &&
                                   phase != PremiumPhase::AwaitPrincipal &&
                                   phase != PremiumPhase::AwaitRedeem; }
    Amount custody() const;
    std::string phase_string() const { return premium_phase_string(phase); }

    // Deposits return the amount to debit from the payer on success.
    TransitionResult try_deposit(PremiumLeg leg, const PartyId& payer, Round submit_round,
                                 Amount* debit);
    TransitionResult try_redeem(const Secret& secret, Round submit_round);
    std::optional<TransitionResult> on_round(Round new_round);
};

}  // namespace swapsim
