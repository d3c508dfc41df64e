// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <iostream>
#include <sstream>

#include "swapsim/scenario.hpp"

using namespace swapsim;

namespace {

const std::string kScenarioDir = SWAPSIM_SCENARIO_DIR;

struct Harness {
    int failures = 0;

    void criterion(int number, const std::string& description, bool pass,
                   const std::string& detail = "") {
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << description;
        if (!pass && !detail.empty()) std::cout << " [" << detail << "]";
        std::cout << "\n";
        if (!pass) failures += 1;
    }
};

Scenario load(const std::string& name) {
    return load_scenario_file(kScenarioDir + "/" + name + ".json");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Criterion 1: across every non-empty deviating subset of {alice, bob}, the
// full htlc deviation catalog never produces a LOSS for a compliant party.
void criterion_1(Harness& h) {
    const auto start = std::chrono::steady_clock::now();
    Scenario scenario = load("htlc");
    ProtocolBundle bundle = scenario_bundle(scenario);
    Valuation valuation = scenario_valuation(scenario);

    std::size_t losses = 0;
    std::size_t runs = 0;
    std::ostringstream detail;
    for (const std::vector<PartyId> subset :
         {std::vector<PartyId>{"alice"}, {"bob"}, {"alice", "bob"}}) {
        SafetyReport report = explore(bundle, subset, valuation);
        losses += report.loss_count();
        runs += report.runs;
    }
    const double elapsed = seconds_since(start);
    detail << losses << " losses over " << runs << " runs in " << elapsed << "s";
    h.criterion(1, "htlc safety sweep finds zero LOSS for compliant parties",
                losses == 0 && elapsed < 10.0, detail.str());
}

// Criterion 2: bob omits the forward; exact final payoffs on both chains.
void criterion_2(Harness& h) {
    Scenario scenario = load("htlc_bob_asleep");
    ProtocolBundle bundle = scenario_bundle(scenario);
    RunVerdict verdict =
        run_with_strategies(bundle, scenario.overrides, scenario_valuation(scenario));
    const auto& alice = verdict.payoff.deltas.at("alice");
    const auto& bob = verdict.payoff.deltas.at("bob");
    const bool pass = alice.at("guilder") == 0 && alice.at("florin") == 100 &&
                      bob.at("guilder") == 0 && bob.at("florin") == -100;
    std::ostringstream detail;
    detail << "alice {g " << alice.at("guilder") << ", f " << alice.at("florin") << "}, bob {g "
           << bob.at("guilder") << ", f " << bob.at("florin") << "}";
    h.criterion(2, "bob asleep loses the coins on both chains, alice holds both", pass,
                detail.str());
}

// Criterion 3: widening bob's deadline to equal alice's admits an attack;
// the published deadlines do not.
void criterion_3(Harness& h) {
    Scenario bad = load("htlc_misconfigured");
    ProtocolBundle bad_bundle = scenario_bundle(bad);
    SafetyReport bad_report = explore(bad_bundle, {"alice"}, scenario_valuation(bad));

    bool bob_loss = false;
    for (const Counterexample& cx : bad_report.counterexamples) {
        if (cx.victim == "bob") bob_loss = true;
    }

    Scenario good = load("htlc");
    ProtocolBundle good_bundle = scenario_bundle(good);
    SafetyReport good_report = explore(good_bundle, {"alice"}, scenario_valuation(good));

    std::ostringstream detail;
    detail << "misconfigured losses " << bad_report.loss_count() << ", correct losses "
           << good_report.loss_count();
    h.criterion(3, "timeout criticality: equal deadlines lose, published deadlines hold",
                bob_loss && good_report.loss_count() == 0, detail.str());
}

// Criterion 4: every single-party deviation leaves the compliant party
// SwapCompleted, MadeWholeRefund, or CompensatedAsVictim with the exact
// published amount, and never profits the deviator.
void criterion_4(Harness& h) {
    Scenario scenario = load("premium");
    ProtocolBundle bundle = scenario_bundle(scenario);
    Valuation valuation = scenario_valuation(scenario);
    const Amount pa = scenario.premium->resolved_premium_a();
    const Amount pb = scenario.premium->resolved_premium_b();

    bool pass = true;
    std::ostringstream detail;
    for (const PartyId deviator : {"alice", "bob"}) {
        const PartyId victim = deviator == "alice" ? "bob" : "alice";
        const AmountDelta expected =
            static_cast<AmountDelta>(deviator == "alice" ? pa : pb);
        for (const Strategy& strategy : enumerate_strategies(bundle, deviator)) {
            RunVerdict verdict = run_with_strategies(bundle, {strategy}, valuation);
            const Classification& cls = verdict.classifications.at(victim);
            if (cls.outcome == Outcome::Loss) {
                pass = false;
                detail << victim << " LOSS under " << strategy.label << "; ";
            }
            if (cls.outcome == Outcome::CompensatedAsVictim && cls.compensation != expected) {
                pass = false;
                detail << victim << " compensated " << cls.compensation << " != " << expected
                       << " under " << strategy.label << "; ";
            }
            if (verdict.payoff.net(deviator, valuation) > 0) {
                pass = false;
                detail << deviator << " profited under " << strategy.label << "; ";
            }
        }
    }
    h.criterion(4, "premium compensation table holds exactly; walk-aways never profit", pass,
                detail.str());
}

// Criterion 5: omitted premiums resolve to exactly 2% of the principal.
void criterion_5(Harness& h) {
    bool pass = true;
    std::ostringstream detail;
    for (const auto& [principal, expected] :
         std::vector<std::pair<Amount, Amount>>{{100, 2}, {150, 3}, {250, 5}, {1000, 20}}) {
        PremiumParams p;
        p.alice_principal = principal;
        p.bob_principal = principal;
        if (p.resolved_premium_a() != expected || p.resolved_premium_b() != expected) {
            pass = false;
            detail << principal << " -> " << p.resolved_premium_a() << " want " << expected
                   << "; ";
        }
    }
    h.criterion(5, "omitted premiums resolve to exactly 2% of principal", pass, detail.str());
}

// Criterion 6: the naive transfer's three deficiencies, exactly.
void criterion_6(Harness& h) {
    Scenario scenario = load("transfer");
    TransferParams params = *scenario.transfer;
    params.alice_secret = make_secret(scenario.seed + "/alice");
    params.carol_secret = make_secret(scenario.seed + "/carol");
    TransferMetrics metrics =
        transfer_metrics(params, scenario.world, scenario_valuation(scenario));

    const AmountDelta expected_peak =
        static_cast<AmountDelta>(params.ab_amount + params.ac_amount);
    const bool pass = metrics.extra_rounds == 3 &&
                      metrics.alice_peak_escrow_with == expected_peak &&
                      metrics.alice_peak_escrow_without ==
                          static_cast<AmountDelta>(params.ab_amount) &&
                      metrics.alice_action_rounds_after_entry == std::vector<Round>{3, 5, 7};
    std::ostringstream detail;
    detail << "extra " << metrics.extra_rounds << ", peak " << metrics.alice_peak_escrow_with
           << "/" << metrics.alice_peak_escrow_without << ", rounds";
    for (Round r : metrics.alice_action_rounds_after_entry) detail << " " << r;
    h.criterion(6, "transfer deficiencies: +3 rounds, AB+AC peak escrow, actions {3,5,7}", pass,
                detail.str());
}

// Criterion 7: exhaustive two-phase-commit sweep: every fault schedule with
// at most two crash/recover events in a 10-round horizon, every vote
// assignment, two participants.
void criterion_7(Harness& h) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<PartyId> nodes = {"carol", "alice", "bob"};

    std::vector<tpc::FaultEvent> all_events;
    for (Round r = 0; r < 10; ++r) {
        for (const PartyId& node : nodes) {
            all_events.push_back({r, node, true});
            all_events.push_back({r, node, false});
        }
    }
    std::vector<tpc::FaultSchedule> schedules;
    schedules.push_back({});
    for (std::size_t i = 0; i < all_events.size(); ++i) {
        schedules.push_back({{all_events[i]}});
        for (std::size_t j = i + 1; j < all_events.size(); ++j) {
            schedules.push_back({{all_events[i], all_events[j]}});
        }
    }

    bool pass = true;
    std::size_t runs = 0;
    std::ostringstream detail;
    for (const tpc::FaultSchedule& schedule : schedules) {
        if (!tpc::fault_schedule_valid(schedule, "carol", {"alice", "bob"})) continue;
        for (int votes = 0; votes < 4 && pass; ++votes) {
            tpc::Config config;
            config.participants = {"alice", "bob"};
            config.votes["alice"] = (votes & 1) ? tpc::Vote::Yes : tpc::Vote::No;
            config.votes["bob"] = (votes & 2) ? tpc::Vote::Yes : tpc::Vote::No;
            config.faults = schedule;
            tpc::Outcome outcome = tpc::run(config);
            runs += 1;

            if (!outcome.agreement) {
                pass = false;
                detail << "divergence with votes " << votes << "; ";
            }
            const bool all_yes = votes == 3;
            if (!all_yes) {
                for (const auto& node : outcome.nodes) {
                    if (node.decision == tpc::Decision::Commit) {
                        pass = false;
                        detail << node.id << " committed despite a no vote; ";
                    }
                }
            }
            if (all_yes && schedule.events.empty()) {
                for (const auto& node : outcome.nodes) {
                    if (node.decision != tpc::Decision::Commit) {
                        pass = false;
                        detail << node.id << " failed to commit in the fault-free run; ";
                    }
                }
            }
        }
        if (!pass) break;
    }
    const double elapsed = seconds_since(start);
    detail << runs << " runs in " << elapsed << "s";
    h.criterion(7, "2PC agreement and validity over all <=2-event fault schedules",
                pass && elapsed < 5.0, detail.str());
}

// Criterion 8: per-chain conservation on every default run (also enforced
// inside the ledger at every boundary) and bit-identical traces across two
// executions with the same seed.
void criterion_8(Harness& h) {
    bool pass = true;
    std::ostringstream detail;

    for (const std::string name : {"htlc", "premium", "transfer"}) {
        Scenario scenario = load(name);
        ProtocolBundle bundle = scenario_bundle(scenario);
        Valuation valuation = scenario_valuation(scenario);

        const World initial = World::create(bundle.world);
        RunVerdict first = run_with_strategies(bundle, scenario.overrides, valuation);
        RunVerdict second = run_with_strategies(bundle, scenario.overrides, valuation);
        if (trace_to_jsonl(first.trace) != trace_to_jsonl(second.trace)) {
            pass = false;
            detail << name << " trace not reproducible; ";
        }

        RunResult replay = run_script(bundle.world, bundle.script, bundle.max_rounds);
        for (const auto& chain : bundle.world.chains) {
            if (replay.world.chain_supply(chain.name) != initial.chain_supply(chain.name)) {
                pass = false;
                detail << name << " supply drift on " << chain.name << "; ";
            }
        }
    }

    // The deviation sweep replays identically as well.
    Scenario scenario = load("htlc");
    ProtocolBundle bundle = scenario_bundle(scenario);
    Valuation valuation = scenario_valuation(scenario);
    for (const Strategy& strategy : enumerate_strategies(bundle, "bob")) {
        RunVerdict a = run_with_strategies(bundle, {strategy}, valuation);
        RunVerdict b = run_with_strategies(bundle, {strategy}, valuation);
        if (trace_to_jsonl(a.trace) != trace_to_jsonl(b.trace)) {
            pass = false;
            detail << "sweep strategy " << strategy.label << " not reproducible; ";
            break;
        }
    }

    tpc::Config config;
    config.participants = {"alice", "bob"};
    config.votes = {{"alice", tpc::Vote::Yes}, {"bob", tpc::Vote::Yes}};
    if (trace_to_jsonl(tpc::run(config).trace) != trace_to_jsonl(tpc::run(config).trace)) {
        pass = false;
        detail << "tpc trace not reproducible; ";
    }

    h.criterion(8, "conservation holds and traces replay bit-identically", pass, detail.str());
}

}  // namespace

int main() {
    Harness h;
    try {
        criterion_1(h);
        criterion_2(h);
        criterion_3(h);
        criterion_4(h);
        criterion_5(h);
        criterion_6(h);
        criterion_7(h);
        criterion_8(h);
    } catch (const std::exception& e) {
        std::cout << "FAIL acceptance suite aborted: " << e.what() << "\n";
        return 1;
    }
    if (h.failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << h.failures << " criteria failed\n";
    return 1;
}
