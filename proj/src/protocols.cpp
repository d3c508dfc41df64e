#include "swapsim/protocols.hpp"

#include <algorithm>

namespace swapsim {

namespace {

const ContractId kHtlcGuilderEscrow = "guilder.htlc";
const ContractId kHtlcFlorinEscrow = "florin.htlc";
const ContractId kPremiumFlorin = "florin.swap";
const ContractId kPremiumGuilder = "guilder.swap";
const ContractId kEdgeAB = "guilder.ab";
const ContractId kEdgeBA = "florin.ba";
const ContractId kEdgeCA = "florin.ca";
const ContractId kEdgeAC = "guilder.ac";

const EscrowContract* escrow_at(const WorldView& view, const ChainId& chain,
                                const ContractId& id) {
    const ContractState* state = view.find_contract(chain, id);
    if (!state) return nullptr;
    return std::get_if<EscrowContract>(state);
}

const PremiumSwapContract* premium_at(const WorldView& view, const ChainId& chain,
                                      const ContractId& id) {
    const ContractState* state = view.find_contract(chain, id);
    if (!state) return nullptr;
    return std::get_if<PremiumSwapContract>(state);
}

// A compliant party acts on a counterparty escrow only after verifying the
// terms it expects, clause for clause.
bool escrow_matches(const EscrowContract* escrow, const PartyId& depositor,
                    const PartyId& beneficiary, Amount amount,
                    const std::vector<Clause>& clauses) {
    return escrow && escrow->state == EscrowState::Live && escrow->depositor == depositor &&
           escrow->beneficiary == beneficiary && escrow->amount == amount &&
           escrow->clauses == clauses;
}

bool has_clause(const EscrowContract* escrow, const Clause& clause) {
    return escrow && std::find(escrow->clauses.begin(), escrow->clauses.end(), clause) !=
                         escrow->clauses.end();
}

}  // namespace

Round Script::last_round() const {
    Round last = 0;
    for (const ScriptStep& step : steps) last = std::max(last, step.round);
    return last;
}

std::vector<std::string> Script::step_names(const PartyId& party) const {
    std::vector<std::string> names;
    for (const ScriptStep& step : steps) {
        if (step.party == party) names.push_back(step.name);
    }
    return names;
}

Script script_htlc_swap(const HtlcParams& p) {
    const Hashlock lock = hashlock(p.alice_secret);
    const Round alice_abs = kHtlcCommitPhaseStart + p.deadlines.alice_escrow;
    const Round bob_abs = kHtlcCommitPhaseStart + p.deadlines.bob_escrow;
    const Clause alice_clause{p.alice, lock, alice_abs, std::nullopt};
    const Clause bob_clause{p.alice, lock, bob_abs, std::nullopt};

    Script script;

    script.steps.push_back({"deploy_escrow", p.alice, 0, p.guilder, false,
                            [=](const WorldView&) -> std::optional<Action> {
                                return DeployEscrowAction{kHtlcGuilderEscrow, p.bob,
                                                          p.alice_principal, {alice_clause}};
                            }});

    script.steps.push_back(
        {"deploy_escrow", p.bob, 1, p.florin, false,
         [=](const WorldView& view) -> std::optional<Action> {
             const EscrowContract* mine = escrow_at(view, p.guilder, kHtlcGuilderEscrow);
             if (!escrow_matches(mine, p.alice, p.bob, p.alice_principal, {alice_clause})) {
                 return std::nullopt;
             }
             return DeployEscrowAction{kHtlcFlorinEscrow, p.alice, p.bob_principal,
                                       {bob_clause}};
         }});

    script.steps.push_back(
        {"claim_counter_escrow", p.alice, 2, p.florin, true,
         [=](const WorldView& view) -> std::optional<Action> {
             const EscrowContract* counter = escrow_at(view, p.florin, kHtlcFlorinEscrow);
             if (!escrow_matches(counter, p.bob, p.alice, p.bob_principal, {bob_clause})) {
                 return std::nullopt;
             }
             return ClaimAction{kHtlcFlorinEscrow, p.alice_secret};
         },
         kHtlcFlorinEscrow, "A"});

    // Bob forwards the hashkey the round it appears on the florin chain.
    script.steps.push_back({"forward_secret", p.bob, 3, p.guilder, true,
                            [=](const WorldView& view) -> std::optional<Action> {
                                auto secret = view.public_secret(lock);
                                if (!secret) return std::nullopt;
                                const EscrowContract* mine =
                                    escrow_at(view, p.guilder, kHtlcGuilderEscrow);
                                if (!mine || mine->state != EscrowState::Live) {
                                    return std::nullopt;
                                }
                                return ClaimAction{kHtlcGuilderEscrow, *secret};
                            },
                            kHtlcGuilderEscrow, ""});

    return script;
}

Script script_premium_swap(const PremiumParams& p) {
    const Hashlock lock = hashlock(p.alice_secret);
    const Amount pa = p.resolved_premium_a();
    const Amount pb = p.resolved_premium_b();

    PremiumSwapParams florin_terms;
    florin_terms.premium_payer = p.alice;
    florin_terms.premium_amount = pa + pb;
    florin_terms.principal_payer = p.bob;
    florin_terms.principal_amount = p.bob_principal;
    florin_terms.principal_beneficiary = p.alice;
    florin_terms.lock = lock;
    florin_terms.premium_deadline = p.deadlines.step[0];
    florin_terms.principal_deadline = p.deadlines.step[3];
    florin_terms.redeem_deadline = p.deadlines.step[4];

    PremiumSwapParams guilder_terms;
    guilder_terms.premium_payer = p.bob;
    guilder_terms.premium_amount = pb;
    guilder_terms.principal_payer = p.alice;
    guilder_terms.principal_amount = p.alice_principal;
    guilder_terms.principal_beneficiary = p.bob;
    guilder_terms.lock = lock;
    guilder_terms.premium_deadline = p.deadlines.step[1];
    guilder_terms.principal_deadline = p.deadlines.step[2];
    guilder_terms.redeem_deadline = p.deadlines.step[5];

    Script script;

    script.steps.push_back({"deploy_florin_contract", p.alice, 0, p.florin, false,
                            [=](const WorldView&) -> std::optional<Action> {
                                return PremiumDeployAction{kPremiumFlorin, florin_terms};
                            }});
    script.steps.push_back(
        {"deposit_premium_florin", p.alice, p.deadlines.step[0] - 1, p.florin, false,
         [=](const WorldView&) -> std::optional<Action> {
             return PremiumDepositAction{kPremiumFlorin, PremiumLeg::Premium};
         }});

    script.steps.push_back({"deploy_guilder_contract", p.bob, 0, p.guilder, false,
                            [=](const WorldView&) -> std::optional<Action> {
                                return PremiumDeployAction{kPremiumGuilder, guilder_terms};
                            }});
    script.steps.push_back(
        {"deposit_premium_guilder", p.bob, p.deadlines.step[1] - 1, p.guilder, false,
         [=](const WorldView& view) -> std::optional<Action> {
             const PremiumSwapContract* florin = premium_at(view, p.florin, kPremiumFlorin);
             if (!florin || !(florin->params == florin_terms) || !florin->premium_in ||
                 florin->terminal()) {
                 return std::nullopt;
             }
             return PremiumDepositAction{kPremiumGuilder, PremiumLeg::Premium};
         }});

    script.steps.push_back(
        {"deposit_principal_guilder", p.alice, p.deadlines.step[2] - 1, p.guilder, false,
         [=](const WorldView& view) -> std::optional<Action> {
             const PremiumSwapContract* guilder = premium_at(view, p.guilder, kPremiumGuilder);
             if (!guilder || !(guilder->params == guilder_terms) || !guilder->premium_in ||
                 guilder->terminal()) {
                 return std::nullopt;
             }
             return PremiumDepositAction{kPremiumGuilder, PremiumLeg::Principal};
         }});

    script.steps.push_back(
        {"deposit_principal_florin", p.bob, p.deadlines.step[3] - 1, p.florin, false,
         [=](const WorldView& view) -> std::optional<Action> {
             const PremiumSwapContract* guilder = premium_at(view, p.guilder, kPremiumGuilder);
             if (!guilder || !guilder->principal_in || guilder->terminal()) {
                 return std::nullopt;
             }
             const PremiumSwapContract* florin = premium_at(view, p.florin, kPremiumFlorin);
             if (!florin || !florin->premium_in || florin->terminal()) {
                 return std::nullopt;
             }
             return PremiumDepositAction{kPremiumFlorin, PremiumLeg::Principal};
         }});

    script.steps.push_back(
        {"redeem_florin", p.alice, p.deadlines.step[4] - 1, p.florin, true,
         [=](const WorldView& view) -> std::optional<Action> {
             const PremiumSwapContract* florin = premium_at(view, p.florin, kPremiumFlorin);
             if (!florin || !florin->principal_in || florin->terminal()) {
                 return std::nullopt;
             }
             return PremiumRedeemAction{kPremiumFlorin, p.alice_secret};
         },
         kPremiumFlorin, "x"});

    script.steps.push_back(
        {"redeem_guilder", p.bob, p.deadlines.step[5] - 1, p.guilder, true,
         [=](const WorldView& view) -> std::optional<Action> {
             auto secret = view.public_secret(lock);
             if (!secret) return std::nullopt;
             const PremiumSwapContract* guilder = premium_at(view, p.guilder, kPremiumGuilder);
             if (!guilder || !guilder->principal_in || guilder->terminal()) {
                 return std::nullopt;
             }
             return PremiumRedeemAction{kPremiumGuilder, *secret};
         },
         kPremiumGuilder, ""});

    return script;
}

Script script_naive_transfer(const TransferParams& p) {
    const Hashlock lock_a = hashlock(p.alice_secret);
    const Hashlock lock_c = hashlock(p.carol_secret);
    const Clause ab_a{p.alice, lock_a, p.deadlines.ab_alice, std::nullopt};
    const Clause ba_a{p.alice, lock_a, p.deadlines.ba_alice, std::nullopt};
    const Clause ca_c{p.carol, lock_c, p.deadlines.ca_carol, std::nullopt};
    const Clause ab_c{p.carol, lock_c, p.deadlines.ab_carol, std::nullopt};
    // The sold position: the C trigger on BA routes Bob's asset to Carol.
    const Clause ba_c{p.carol, lock_c, p.deadlines.ba_carol, p.carol};
    const Clause ac_c{p.carol, lock_c, p.deadlines.ac_carol, std::nullopt};

    Script script;

    script.steps.push_back({"deploy_ab", p.alice, 0, p.guilder, false,
                            [=](const WorldView&) -> std::optional<Action> {
                                return DeployEscrowAction{kEdgeAB, p.bob, p.ab_amount, {ab_a}};
                            }});

    script.steps.push_back(
        {"deploy_ba", p.bob, 1, p.florin, false,
         [=](const WorldView& view) -> std::optional<Action> {
             const EscrowContract* ab = escrow_at(view, p.guilder, kEdgeAB);
             if (!escrow_matches(ab, p.alice, p.bob, p.ab_amount, {ab_a})) {
                 return std::nullopt;
             }
             return DeployEscrowAction{kEdgeBA, p.alice, p.ba_amount, {ba_a}};
         }});

    if (p.carol_participates) {
        script.steps.push_back(
            {"deploy_ca", p.carol, 2, p.florin, false,
             [=](const WorldView& view) -> std::optional<Action> {
                 const EscrowContract* ba = escrow_at(view, p.florin, kEdgeBA);
                 if (!escrow_matches(ba, p.bob, p.alice, p.ba_amount, {ba_a})) {
                     return std::nullopt;
                 }
                 return DeployEscrowAction{kEdgeCA, p.alice, p.ca_amount, {ca_c}};
             }});
    }

    script.steps.push_back(
        {"modify_ab", p.alice, 3, p.guilder,
         false, [=](const WorldView& view) -> std::optional<Action> {
             const EscrowContract* ca = escrow_at(view, p.florin, kEdgeCA);
             if (!escrow_matches(ca, p.carol, p.alice, p.ca_amount, {ca_c})) {
                 return std::nullopt;
             }
             return AddClauseAction{kEdgeAB, ab_c};
         }});

    // Carol absent by round 3: the protocol proceeds as a normal swap.
    script.steps.push_back(
        {"claim_ba_plain", p.alice, 3, p.florin, true,
         [=](const WorldView& view) -> std::optional<Action> {
             const EscrowContract* ca = escrow_at(view, p.florin, kEdgeCA);
             if (escrow_matches(ca, p.carol, p.alice, p.ca_amount, {ca_c})) {
                 return std::nullopt;
             }
             const EscrowContract* ba = escrow_at(view, p.florin, kEdgeBA);
             if (!escrow_matches(ba, p.bob, p.alice, p.ba_amount, {ba_a})) {
                 return std::nullopt;
             }
             return ClaimAction{kEdgeBA, p.alice_secret};
         },
         kEdgeBA, "A"});

    script.steps.push_back(
        {"modify_ba", p.bob, 4, p.florin, false,
         [=](const WorldView& view) -> std::optional<Action> {
             const EscrowContract* ab = escrow_at(view, p.guilder, kEdgeAB);
             if (!has_clause(ab, ab_c) || ab->state != EscrowState::Live) {
                 return std::nullopt;
             }
             const EscrowContract* ba = escrow_at(view, p.florin, kEdgeBA);
             if (!ba || ba->state != EscrowState::Live) return std::nullopt;
             return AddClauseAction{kEdgeBA, ba_c};
         }});

    script.steps.push_back({"claim_ab_plain", p.bob, 4, p.guilder, true,
                            [=](const WorldView& view) -> std::optional<Action> {
                                auto secret = view.public_secret(lock_a);
                                if (!secret) return std::nullopt;
                                const EscrowContract* ab = escrow_at(view, p.guilder, kEdgeAB);
                                if (!ab || ab->state != EscrowState::Live) return std::nullopt;
                                return ClaimAction{kEdgeAB, *secret};
                            },
                            kEdgeAB, ""});

    script.steps.push_back(
        {"deploy_ac", p.alice, 5, p.guilder, false,
         [=](const WorldView& view) -> std::optional<Action> {
             const EscrowContract* ca = escrow_at(view, p.florin, kEdgeCA);
             if (!escrow_matches(ca, p.carol, p.alice, p.ca_amount, {ca_c})) {
                 return std::nullopt;
             }
             const EscrowContract* ba = escrow_at(view, p.florin, kEdgeBA);
             if (!has_clause(ba, ba_c) || ba->state != EscrowState::Live) {
                 return std::nullopt;
             }
             return DeployEscrowAction{kEdgeAC, p.carol, p.ac_amount, {ac_c}};
         }});

    if (p.carol_participates) {
        // Carol exercises only once both assets are claimable by C.
        auto exercise_ready = [=](const WorldView& view) {
            const EscrowContract* ba = escrow_at(view, p.florin, kEdgeBA);
            if (!has_clause(ba, ba_c) || ba->state != EscrowState::Live) return false;
            const EscrowContract* ac = escrow_at(view, p.guilder, kEdgeAC);
            return escrow_matches(ac, p.alice, p.carol, p.ac_amount, {ac_c});
        };
        script.steps.push_back({"claim_ba", p.carol, 6, p.florin, true,
                                [=](const WorldView& view) -> std::optional<Action> {
                                    if (!exercise_ready(view)) return std::nullopt;
                                    return ClaimAction{kEdgeBA, p.carol_secret};
                                },
                                kEdgeBA, "C"});
        script.steps.push_back({"claim_ac", p.carol, 6, p.guilder, true,
                                [=](const WorldView& view) -> std::optional<Action> {
                                    if (!exercise_ready(view)) return std::nullopt;
                                    return ClaimAction{kEdgeAC, p.carol_secret};
                                },
                                kEdgeAC, "C"});
    }

    script.steps.push_back({"claim_ca", p.alice, 7, p.florin, true,
                            [=](const WorldView& view) -> std::optional<Action> {
                                auto secret = view.public_secret(lock_c);
                                if (!secret) return std::nullopt;
                                const EscrowContract* ca = escrow_at(view, p.florin, kEdgeCA);
                                if (!ca || ca->state != EscrowState::Live) return std::nullopt;
                                return ClaimAction{kEdgeCA, *secret};
                            },
                            kEdgeCA, ""});

    // Only Alice's CA claim appears in the table's last row; Bob collects AB
    // with the now-public C in the same round or the asset would strand.
    script.steps.push_back({"claim_ab", p.bob, 7, p.guilder, true,
                            [=](const WorldView& view) -> std::optional<Action> {
                                auto secret = view.public_secret(lock_c);
                                if (!secret) return std::nullopt;
                                const EscrowContract* ab = escrow_at(view, p.guilder, kEdgeAB);
                                if (!ab || ab->state != EscrowState::Live) return std::nullopt;
                                return ClaimAction{kEdgeAB, *secret};
                            },
                            kEdgeAB, ""});

    return script;
}

ProtocolBundle htlc_bundle(const HtlcParams& p, const WorldInit& world) {
    const Hashlock lock = hashlock(p.alice_secret);
    ProtocolBundle bundle;
    bundle.name = "htlc";
    bundle.world = world;
    bundle.script = script_htlc_swap(p);
    bundle.parties = {p.alice, p.bob};
    bundle.contracts = {
        {kHtlcGuilderEscrow, p.guilder, true, {{lock, p.alice}}},
        {kHtlcFlorinEscrow, p.florin, true, {{lock, p.alice}}},
    };
    bundle.secrets[p.alice]["A"] = p.alice_secret;
    bundle.max_deadline = kHtlcCommitPhaseStart +
                          std::max(p.deadlines.alice_escrow, p.deadlines.bob_escrow);

    const AmountDelta a = static_cast<AmountDelta>(p.alice_principal);
    const AmountDelta b = static_cast<AmountDelta>(p.bob_principal);
    bundle.roles[p.alice] = {p.guilder, {{{p.guilder, -a}, {p.florin, b}}}};
    bundle.roles[p.bob] = {p.florin, {{{p.guilder, a}, {p.florin, -b}}}};
    return bundle;
}

ProtocolBundle premium_bundle(const PremiumParams& p, const WorldInit& world) {
    const Hashlock lock = hashlock(p.alice_secret);
    ProtocolBundle bundle;
    bundle.name = "premium";
    bundle.world = world;
    bundle.script = script_premium_swap(p);
    bundle.parties = {p.alice, p.bob};
    bundle.contracts = {
        {kPremiumFlorin, p.florin, false, {{lock, p.alice}}},
        {kPremiumGuilder, p.guilder, false, {{lock, p.alice}}},
    };
    bundle.secrets[p.alice]["x"] = p.alice_secret;
    bundle.max_deadline = *std::max_element(p.deadlines.step.begin(), p.deadlines.step.end());

    const AmountDelta a = static_cast<AmountDelta>(p.alice_principal);
    const AmountDelta b = static_cast<AmountDelta>(p.bob_principal);
    const AmountDelta pa = static_cast<AmountDelta>(p.resolved_premium_a());
    const AmountDelta pb = static_cast<AmountDelta>(p.resolved_premium_b());
    // Second pattern each: the counterparty stopped after the redeem landed,
    // so the principal refunded and its premium rider was forfeited over.
    bundle.roles[p.alice] = {p.guilder,
                             {{{p.guilder, -a}, {p.florin, b}},
                              {{p.guilder, pb}, {p.florin, b}}}};
    bundle.roles[p.bob] = {p.florin,
                           {{{p.guilder, a}, {p.florin, -b}},
                            {{p.guilder, a}, {p.florin, pa + pb}}}};
    return bundle;
}

ProtocolBundle transfer_bundle(const TransferParams& p, const WorldInit& world) {
    const Hashlock lock_a = hashlock(p.alice_secret);
    const Hashlock lock_c = hashlock(p.carol_secret);
    ProtocolBundle bundle;
    bundle.name = "transfer";
    bundle.world = world;
    bundle.script = script_naive_transfer(p);
    bundle.parties = {p.alice, p.bob};
    if (p.carol_participates) bundle.parties.push_back(p.carol);
    bundle.contracts = {
        {kEdgeAB, p.guilder, true, {{lock_a, p.alice}, {lock_c, p.carol}}},
        {kEdgeBA, p.florin, true, {{lock_a, p.alice}, {lock_c, p.carol}}},
    };
    if (p.carol_participates) {
        bundle.contracts.push_back({kEdgeCA, p.florin, true, {{lock_c, p.carol}}});
        bundle.contracts.push_back({kEdgeAC, p.guilder, true, {{lock_c, p.carol}}});
    }
    bundle.secrets[p.alice]["A"] = p.alice_secret;
    if (p.carol_participates) bundle.secrets[p.carol]["C"] = p.carol_secret;
    bundle.max_deadline = std::max({p.deadlines.ab_alice, p.deadlines.ba_alice,
                                    p.deadlines.ca_carol, p.deadlines.ab_carol,
                                    p.deadlines.ba_carol, p.deadlines.ac_carol});

    const AmountDelta ab = static_cast<AmountDelta>(p.ab_amount);
    const AmountDelta ba = static_cast<AmountDelta>(p.ba_amount);
    const AmountDelta ca = static_cast<AmountDelta>(p.ca_amount);
    const AmountDelta ac = static_cast<AmountDelta>(p.ac_amount);
    PartyRole alice_role;
    alice_role.principal_chain = p.guilder;
    alice_role.completed_patterns = {
        {{p.guilder, -ab}, {p.florin, ba}},        // no sale: the plain swap
        {{p.guilder, -(ab + ac)}, {p.florin, ca}},  // sold and fully exercised
        {{p.guilder, -ab}, {p.florin, ca}},         // sold; AC leg refunded
    };
    bundle.roles[p.alice] = alice_role;
    bundle.roles[p.bob] = {p.florin, {{{p.guilder, ab}, {p.florin, -ba}}}};
    if (p.carol_participates) {
        bundle.roles[p.carol] = {p.florin, {{{p.guilder, ac}, {p.florin, ba - ca}}}};
    }
    return bundle;
}

RunResult run_script(const WorldInit& init, const Script& script, Round max_rounds) {
    World world = World::create(init);
    const Round last_step = script.last_round();

    while (world.round() < max_rounds) {
        const Round r = world.round();
        std::vector<const ScriptStep*> due;
        for (const ScriptStep& step : script.steps) {
            if (step.round == r) due.push_back(&step);
        }
        std::stable_sort(due.begin(), due.end(), [](const ScriptStep* a, const ScriptStep* b) {
            return a->party < b->party;
        });
        WorldView view(world);
        for (const ScriptStep* step : due) {
            std::optional<Action> action = step->build(view);
            if (action) {
                world.submit(step->party, step->chain, std::move(*action));
            }
        }
        world.advance_round();
        if (world.round() > last_step && world.all_contracts_terminal()) {
            break;
        }
    }

    RunResult result{std::move(world), 0, false};
    result.hit_round_cap = !result.world.all_contracts_terminal() ||
                           (result.world.round() >= max_rounds &&
                            result.world.round() <= last_step);
    for (const TraceEvent& event : result.world.trace()) {
        if (!event.result.contains("phase")) continue;
        const std::string phase = event.result["phase"].get<std::string>();
        if (phase == "Live" || phase == "AwaitPremium" || phase == "AwaitPrincipal" ||
            phase == "AwaitRedeem") {
            continue;
        }
        result.resolution_round = std::max(result.resolution_round, event.round);
    }
    return result;
}

}  // namespace swapsim
