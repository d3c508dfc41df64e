#include "swapsim/contracts.hpp"

#include <algorithm>

namespace swapsim {

namespace {

TransitionResult rejected(std::string reason) {
    TransitionResult r;
    r.accepted = false;
    r.reason = std::move(reason);
    return r;
}

}  // namespace

Round EscrowContract::refund_deadline() const {
    Round max_deadline = 0;
    for (const Clause& c : clauses) {
        max_deadline = std::max(max_deadline, c.deadline);
    }
    return max_deadline;
}

std::string EscrowContract::phase_string() const {
    switch (state) {
        case EscrowState::Live: return "Live";
        case EscrowState::Claimed: return "Claimed";
        case EscrowState::Refunded: return "Refunded";
    }
    return "Live";
}

TransitionResult EscrowContract::try_claim(const Secret& secret, Round submit_round) {
    if (terminal()) {
        return rejected("contract not live");
    }
    bool matched = false;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        if (!verify(clauses[i].lock, secret)) continue;
        matched = true;
        if (submit_round < clauses[i].deadline) {
            state = EscrowState::Claimed;
            claimed_clause = i;
            TransitionResult r;
            r.accepted = true;
            r.clause_index = i;
            r.credits.push_back({clauses[i].recipient.value_or(beneficiary), amount});
            return r;
        }
    }
    return rejected(matched ? "all matching clauses expired" : "no matching clause");
}

TransitionResult EscrowContract::try_refund(Round submit_round) {
    if (terminal()) {
        return rejected("contract not live");
    }
    if (submit_round < refund_deadline()) {
        return rejected("refund before deadline");
    }
    state = EscrowState::Refunded;
    TransitionResult r;
    r.accepted = true;
    r.credits.push_back({depositor, amount});
    return r;
}

TransitionResult EscrowContract::try_add_clause(const PartyId& caller, const Clause& clause) {
    if (terminal()) {
        return rejected("contract not live");
    }
    if (caller != depositor) {
        return rejected("only the depositor may add clauses");
    }
    if (clause.deadline == 0) {
        return rejected("clause deadline must be positive");
    }
    if (clause.deadline < refund_deadline()) {
        return rejected("clause deadline shorter than an existing clause");
    }
    clauses.push_back(clause);
    TransitionResult r;
    r.accepted = true;
    r.clause_index = clauses.size() - 1;
    return r;
}

std::optional<TransitionResult> EscrowContract::on_round(Round new_round) {
    if (terminal() || new_round < refund_deadline()) {
        return std::nullopt;
    }
    state = EscrowState::Refunded;
    TransitionResult r;
    r.accepted = true;
    r.credits.push_back({depositor, amount});
    return r;
}

std::string premium_phase_string(PremiumPhase phase) {
    switch (phase) {
        case PremiumPhase::AwaitPremium: return "AwaitPremium";
        case PremiumPhase::AwaitPrincipal: return "AwaitPrincipal";
        case PremiumPhase::AwaitRedeem: return "AwaitRedeem";
        case PremiumPhase::SettledComplete: return "SettledComplete";
        case PremiumPhase::SettledPrincipalRefundPremiumForfeit:
            return "SettledPrincipalRefund+PremiumForfeit";
        case PremiumPhase::SettledPremiumRefund: return "SettledPremiumRefund";
        case PremiumPhase::SettledPrincipalRefundPremiumRefund:
            return "SettledPrincipalRefund+PremiumRefund";
    }
    return "AwaitPremium";
}

Amount PremiumSwapContract::custody() const {
    if (terminal()) return 0;
    Amount held = 0;
    if (premium_in) held = add_amount(held, params.premium_amount);
    if (principal_in) held = add_amount(held, params.principal_amount);
    return held;
}

TransitionResult PremiumSwapContract::try_deposit(PremiumLeg leg, const PartyId& payer,
                                                  Round submit_round, Amount* debit) {
    *debit = 0;
    if (terminal()) {
        return rejected("contract settled");
    }
    if (leg == PremiumLeg::Premium) {
        if (payer != params.premium_payer) {
            return rejected("only the premium payer may deposit the premium");
        }
        if (premium_in) {
            return rejected("premium already deposited");
        }
        if (submit_round >= params.premium_deadline) {
            return rejected("premium deposit after deadline");
        }
        premium_in = true;
        if (phase == PremiumPhase::AwaitPremium) {
            phase = principal_in ? PremiumPhase::AwaitRedeem : PremiumPhase::AwaitPrincipal;
        }
        *debit = params.premium_amount;
    } else {
        if (payer != params.principal_payer) {
            return rejected("only the principal payer may deposit the principal");
        }
        if (principal_in) {
            return rejected("principal already deposited");
        }
        if (submit_round >= params.principal_deadline) {
            return rejected("principal deposit after deadline");
        }
        principal_in = true;
        phase = PremiumPhase::AwaitRedeem;
        *debit = params.principal_amount;
    }
    TransitionResult r;
    r.accepted = true;
    return r;
}

TransitionResult PremiumSwapContract::try_redeem(const Secret& secret, Round submit_round) {
    if (terminal()) {
        return rejected("contract settled");
    }
    if (!principal_in) {
        return rejected("principal not in custody");
    }
    if (!verify(params.lock, secret)) {
        return rejected("secret does not match hashlock");
    }
    if (submit_round >= params.redeem_deadline) {
        return rejected("redeem after deadline");
    }
    phase = PremiumPhase::SettledComplete;
    TransitionResult r;
    r.accepted = true;
    r.credits.push_back({params.principal_beneficiary, params.principal_amount});
    if (premium_in) {
        r.credits.push_back({params.premium_payer, params.premium_amount});
    }
    return r;
}

std::optional<TransitionResult> PremiumSwapContract::on_round(Round new_round) {
    if (terminal()) {
        return std::nullopt;
    }
    if (!principal_in && new_round >= params.principal_deadline) {
        phase = PremiumPhase::SettledPremiumRefund;
        TransitionResult r;
        r.accepted = true;
        if (premium_in) {
            r.credits.push_back({params.premium_payer, params.premium_amount});
        }
        return r;
    }
    if (principal_in && new_round >= params.redeem_deadline) {
        TransitionResult r;
        r.accepted = true;
        r.credits.push_back({params.principal_payer, params.principal_amount});
        if (premium_in) {
            phase = PremiumPhase::SettledPrincipalRefundPremiumForfeit;
            r.credits.push_back({params.principal_payer, params.premium_amount});
        } else {
            phase = PremiumPhase::SettledPrincipalRefundPremiumRefund;
        }
        return r;
    }
    return std::nullopt;
}

}  // namespace swapsim
