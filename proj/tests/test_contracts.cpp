#include <doctest.h>

#include <map>

#include "swapsim/contracts.hpp"

using namespace swapsim;

namespace {

EscrowContract make_escrow(Round deadline) {
    EscrowContract escrow;
    escrow.id = "guilder.htlc";
    escrow.chain = "guilder";
    escrow.depositor = "alice";
    escrow.beneficiary = "bob";
    escrow.amount = 100;
    escrow.clauses = {{"alice", hashlock(make_secret("s")), deadline, std::nullopt}};
    return escrow;
}

PremiumSwapContract make_premium() {
    PremiumSwapContract c;
    c.id = "florin.swap";
    c.chain = "florin";
    c.params.premium_payer = "alice";
    c.params.premium_amount = 4;
    c.params.principal_payer = "bob";
    c.params.principal_amount = 100;
    c.params.principal_beneficiary = "alice";
    c.params.lock = hashlock(make_secret("x"));
    c.params.premium_deadline = 1;
    c.params.principal_deadline = 4;
    c.params.redeem_deadline = 5;
    return c;
}

}  // namespace

TEST_CASE("escrow claim pays the clause recipient before the deadline") {
    EscrowContract escrow = make_escrow(2);
    const Secret s = make_secret("s");

    SUBCASE("timely claim") {
        auto r = escrow.try_claim(s, 1);
        CHECK(r.accepted);
        REQUIRE(r.credits.size() == 1);
        CHECK(r.credits[0].party == "bob");
        CHECK(r.credits[0].amount == 100);
        CHECK(escrow.state == EscrowState::Claimed);
        CHECK(escrow.custody() == 0);
        // terminal: everything else is rejected
        CHECK_FALSE(escrow.try_claim(s, 1).accepted);
        CHECK_FALSE(escrow.try_refund(5).accepted);
        CHECK_FALSE(escrow.on_round(5).has_value());
    }

    SUBCASE("wrong secret rejected, state unchanged") {
        auto r = escrow.try_claim(make_secret("other"), 0);
        CHECK_FALSE(r.accepted);
        CHECK(r.reason == "no matching clause");
        CHECK(escrow.state == EscrowState::Live);
    }

    SUBCASE("late claim rejected") {
        auto r = escrow.try_claim(s, 2);
        CHECK_FALSE(r.accepted);
        CHECK(r.reason == "all matching clauses expired");
    }

    SUBCASE("clause recipient override routes the payout") {
        escrow.clauses.push_back({"carol", hashlock(make_secret("c")), 3, PartyId{"carol"}});
        auto r = escrow.try_claim(make_secret("c"), 2);
        CHECK(r.accepted);
        REQUIRE(r.credits.size() == 1);
        CHECK(r.credits[0].party == "carol");
    }
}

TEST_CASE("escrow refund semantics") {
    EscrowContract escrow = make_escrow(2);

    CHECK_FALSE(escrow.try_refund(1).accepted);  // before deadline

    SUBCASE("explicit refund after the deadline") {
        auto r = escrow.try_refund(2);
        CHECK(r.accepted);
        CHECK(r.credits[0].party == "alice");
        CHECK(escrow.state == EscrowState::Refunded);
    }

    SUBCASE("automatic refund at the boundary") {
        CHECK_FALSE(escrow.on_round(1).has_value());
        auto fired = escrow.on_round(2);
        REQUIRE(fired.has_value());
        CHECK(fired->credits[0].party == "alice");
        CHECK(escrow.state == EscrowState::Refunded);
    }
}

TEST_CASE("add_clause authorization and monotonicity") {
    EscrowContract escrow = make_escrow(6);
    const Clause later{"carol", hashlock(make_secret("c")), 7, std::nullopt};
    const Clause earlier{"carol", hashlock(make_secret("c")), 5, std::nullopt};

    CHECK_FALSE(escrow.try_add_clause("carol", later).accepted);
    CHECK_FALSE(escrow.try_add_clause("alice", earlier).accepted);

    auto r = escrow.try_add_clause("alice", later);
    CHECK(r.accepted);
    CHECK(escrow.refund_deadline() == 7);

    escrow.state = EscrowState::Refunded;
    CHECK_FALSE(escrow.try_add_clause("alice", {"x", Hashlock{}, 9, std::nullopt}).accepted);
}

TEST_CASE("premium deposits validate payer, deadline, and double deposits") {
    PremiumSwapContract c = make_premium();
    Amount debit = 0;

    CHECK_FALSE(c.try_deposit(PremiumLeg::Premium, "bob", 0, &debit).accepted);
    CHECK_FALSE(c.try_deposit(PremiumLeg::Premium, "alice", 1, &debit).accepted);  // late

    CHECK(c.try_deposit(PremiumLeg::Premium, "alice", 0, &debit).accepted);
    CHECK(debit == 4);
    CHECK(c.phase == PremiumPhase::AwaitPrincipal);
    CHECK_FALSE(c.try_deposit(PremiumLeg::Premium, "alice", 0, &debit).accepted);  // double

    CHECK_FALSE(c.try_deposit(PremiumLeg::Principal, "alice", 1, &debit).accepted);
    CHECK(c.try_deposit(PremiumLeg::Principal, "bob", 3, &debit).accepted);
    CHECK(debit == 100);
    CHECK(c.phase == PremiumPhase::AwaitRedeem);
    CHECK(c.custody() == 104);
}

TEST_CASE("premium redeem validates secret, custody, and deadline") {
    PremiumSwapContract c = make_premium();
    Amount debit = 0;
    const Secret x = make_secret("x");

    CHECK_FALSE(c.try_redeem(x, 2).accepted);  // principal not in custody
    c.try_deposit(PremiumLeg::Premium, "alice", 0, &debit);
    c.try_deposit(PremiumLeg::Principal, "bob", 3, &debit);

    CHECK_FALSE(c.try_redeem(make_secret("wrong"), 4).accepted);
    CHECK_FALSE(c.try_redeem(x, 5).accepted);  // late

    auto r = c.try_redeem(x, 4);
    CHECK(r.accepted);
    CHECK(c.phase == PremiumPhase::SettledComplete);
    REQUIRE(r.credits.size() == 2);
    CHECK(r.credits[0].party == "alice");  // principal to beneficiary
    CHECK(r.credits[0].amount == 100);
    CHECK(r.credits[1].party == "alice");  // premium refund
    CHECK(r.credits[1].amount == 4);
}

// The disposition rule table, checked exhaustively: every ordering of
// premium / principal / redeem submissions, each timely or late or absent,
// settles into exactly one terminal state with the premium going entirely to
// one side. The expected credits come from evaluating the three prose rules
// directly on what actually entered custody.
TEST_CASE("premium disposition rule table is total and exclusive") {
    // Candidate submission rounds: one timely, one late, or skipped.
    const std::vector<std::optional<Round>> premium_rounds = {std::nullopt, 0, 1};
    const std::vector<std::optional<Round>> principal_rounds = {std::nullopt, 2, 4};
    const std::vector<std::optional<Round>> redeem_rounds = {std::nullopt, 3, 4, 5};

    for (auto premium_round : premium_rounds) {
        for (auto principal_round : principal_rounds) {
            for (auto redeem_round : redeem_rounds) {
                PremiumSwapContract c = make_premium();
                std::map<PartyId, Amount> credited;
                Amount debited = 0;

                for (Round now = 0; now <= 6; ++now) {
                    // Submissions land before the boundary into now+1.
                    Amount debit = 0;
                    if (premium_round && *premium_round == now) {
                        if (c.try_deposit(PremiumLeg::Premium, "alice", now, &debit).accepted) {
                            debited += debit;
                        }
                    }
                    if (principal_round && *principal_round == now) {
                        if (c.try_deposit(PremiumLeg::Principal, "bob", now, &debit).accepted) {
                            debited += debit;
                        }
                    }
                    if (redeem_round && *redeem_round == now) {
                        auto r = c.try_redeem(make_secret("x"), now);
                        for (const Credit& credit : r.credits) {
                            credited[credit.party] += credit.amount;
                        }
                    }
                    if (auto fired = c.on_round(now + 1)) {
                        for (const Credit& credit : fired->credits) {
                            credited[credit.party] += credit.amount;
                        }
                    }
                }

                CAPTURE(premium_round ? int(*premium_round) : -1);
                CAPTURE(principal_round ? int(*principal_round) : -1);
                CAPTURE(redeem_round ? int(*redeem_round) : -1);

                // Totality: always terminal by the redeem deadline.
                CHECK(c.terminal());
                CHECK(c.custody() == 0);

                // Independent evaluation of the three rules.
                const bool premium_in = premium_round && *premium_round < 1;
                const bool principal_in = principal_round && *principal_round < 4;
                const bool redeemed = principal_in && redeem_round && *redeem_round < 5 &&
                                      (!principal_round || *redeem_round >= *principal_round);

                std::map<PartyId, Amount> expected;
                if (redeemed) {
                    expected["alice"] += 100;                  // principal to beneficiary
                    if (premium_in) expected["alice"] += 4;    // premium refund
                    CHECK(c.phase == PremiumPhase::SettledComplete);
                } else if (principal_in) {
                    expected["bob"] += 100;                    // principal refund
                    if (premium_in) expected["bob"] += 4;      // premium forfeit
                } else {
                    if (premium_in) expected["alice"] += 4;    // premium refund
                    CHECK(c.phase == PremiumPhase::SettledPremiumRefund);
                }
                CHECK(credited == expected);

                // Everything that entered custody left it exactly once.
                Amount total_credited = 0;
                for (const auto& [party, amount] : credited) total_credited += amount;
                CHECK(total_credited == debited);
            }
        }
    }
}

TEST_CASE("premium terminal phase strings are stable") {
    CHECK(premium_phase_string(PremiumPhase::SettledComplete) == "SettledComplete");
    CHECK(premium_phase_string(PremiumPhase::SettledPrincipalRefundPremiumForfeit) ==
          "SettledPrincipalRefund+PremiumForfeit");
    CHECK(premium_phase_string(PremiumPhase::SettledPremiumRefund) == "SettledPremiumRefund");
    CHECK(premium_phase_string(PremiumPhase::SettledPrincipalRefundPremiumRefund) ==
          "SettledPrincipalRefund+PremiumRefund");
}
