#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "swapsim/scenario.hpp"

namespace {

using namespace swapsim;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitViolation = 3;

void write_trace(const std::string& path, const std::vector<TraceEvent>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file " + path);
    out << trace_to_jsonl(trace);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : s) {
        if (c == ',') {
            if (!current.empty()) parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) parts.push_back(current);
    return parts;
}

void print_run_table(const RunVerdict& verdict, const Valuation& valuation) {
    std::cout << "payoffs:\n";
    for (const auto& [party, row] : verdict.payoff.deltas) {
        std::cout << "  " << party << ":";
        for (const auto& [chain, delta] : row) {
            std::cout << " " << chain << " " << (delta >= 0 ? "+" : "") << delta;
        }
        std::cout << "  (net " << verdict.payoff.net(party, valuation) << ")\n";
    }
    if (!verdict.classifications.empty()) {
        std::cout << "verdicts:\n";
        for (const auto& [party, cls] : verdict.classifications) {
            std::cout << "  " << party << ": " << outcome_name(cls.outcome);
            if (cls.outcome == Outcome::CompensatedAsVictim) {
                std::cout << " (" << cls.compensation << ")";
            }
            if (!cls.details.empty()) std::cout << " [" << cls.details << "]";
            std::cout << "\n";
        }
    }
    std::cout << "resolved_by_round: " << verdict.resolution_round << "\n";
}

ordered_json run_json(const RunVerdict& verdict, const Valuation& valuation) {
    ordered_json j;
    j["payoffs"] = verdict.payoff.to_json();
    ordered_json nets;
    for (const auto& [party, row] : verdict.payoff.deltas) {
        nets[party] = verdict.payoff.net(party, valuation);
    }
    j["net"] = nets;
    ordered_json verdicts;
    for (const auto& [party, cls] : verdict.classifications) {
        ordered_json v;
        v["outcome"] = outcome_name(cls.outcome);
        if (cls.outcome == Outcome::CompensatedAsVictim) v["compensation"] = cls.compensation;
        if (!cls.details.empty()) v["details"] = cls.details;
        verdicts[party] = v;
    }
    j["verdicts"] = verdicts;
    j["resolution_round"] = verdict.resolution_round;
    ordered_json lockup;
    for (const auto& [party, rounds] : verdict.lockup_rounds) lockup[party] = rounds;
    j["lockup"] = lockup;
    return j;
}

int cmd_run(const std::string& path, const std::string& trace_path, const std::string& format,
            const std::string& seed, int max_rounds) {
    Scenario scenario = load_scenario_file(path);
    if (!seed.empty()) scenario.seed = seed;
    if (max_rounds > 0) scenario.max_rounds = static_cast<Round>(max_rounds);

    if (scenario.tpc_config) {
        tpc::Outcome outcome = tpc::run(*scenario.tpc_config);
        if (!trace_path.empty()) write_trace(trace_path, outcome.trace);
        for (const auto& node : outcome.nodes) {
            std::cout << node.id << ": ";
            if (node.decision) {
                std::cout << (*node.decision == tpc::Decision::Commit ? "commit" : "abort")
                          << " @ round " << *node.decided_round;
            } else {
                std::cout << "blocked";
            }
            std::cout << "\n";
        }
        std::cout << "agreement: " << (outcome.agreement ? "yes" : "no") << "\n";
        return outcome.agreement ? kExitOk : kExitViolation;
    }

    ProtocolBundle bundle = scenario_bundle(scenario);
    Valuation valuation = scenario_valuation(scenario);
    RunVerdict verdict = run_with_strategies(bundle, scenario.overrides, valuation);
    if (!trace_path.empty()) write_trace(trace_path, verdict.trace);

    if (format == "json") {
        std::cout << run_json(verdict, valuation).dump(2) << "\n";
    } else {
        print_run_table(verdict, valuation);
    }

    for (const auto& [party, cls] : verdict.classifications) {
        if (cls.outcome == Outcome::Loss) return kExitViolation;
    }
    return kExitOk;
}

int cmd_explore(const std::string& path, const std::string& deviating_csv,
                const std::string& format, const std::string& report_path,
                const std::string& seed) {
    Scenario scenario = load_scenario_file(path);
    if (!seed.empty()) scenario.seed = seed;
    ProtocolBundle bundle = scenario_bundle(scenario);
    Valuation valuation = scenario_valuation(scenario);

    std::vector<PartyId> deviating = split_csv(deviating_csv);
    if (deviating.empty()) {
        throw ScenarioError("explore: --deviating must name at least one party");
    }
    SafetyReport report = explore(bundle, deviating, valuation);

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write report file " + report_path);
        out << report.to_json().dump(2) << "\n";
    }

    if (format == "json") {
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        std::cout << "protocol: " << report.protocol << "\n";
        std::cout << "deviating:";
        for (const auto& p : report.deviating) std::cout << " " << p;
        std::cout << "\ncatalog sizes:";
        for (const auto& [party, size] : report.catalog_sizes) {
            std::cout << " " << party << "=" << size;
        }
        std::cout << "\nruns: " << report.runs << "\n";
        std::cout << "classifications:\n";
        for (const auto& [label, count] : report.classification_counts) {
            std::cout << "  " << label << ": " << count << "\n";
        }
        if (report.unverdicted_runs > 0) {
            std::cout << "unverdicted runs (no compliant party): " << report.unverdicted_runs
                      << "\n";
        }
        std::cout << "max lockup rounds:";
        for (const auto& [party, rounds] : report.max_lockup) {
            std::cout << " " << party << "=" << rounds;
        }
        std::cout << "\n";
        if (!report.counterexamples.empty()) {
            std::cout << "counterexamples:\n";
            for (const auto& cx : report.counterexamples) {
                std::cout << "  victim " << cx.victim << " " << cx.details << "\n"
                          << "    strategies: " << cx.strategies.dump() << "\n";
            }
        }
    }
    return report.loss_count() == 0 ? kExitOk : kExitViolation;
}

tpc::FaultSchedule parse_faults(const std::string& spec) {
    tpc::FaultSchedule schedule;
    for (const std::string& token : split_csv(spec)) {
        if (token == "coordinator@after-prepare") {
            // The probe shape: the coordinator goes dark holding the votes
            // and comes back later.
            schedule.events.push_back({2, "carol", true});
            schedule.events.push_back({6, "carol", false});
            continue;
        }
        auto at = token.find('@');
        auto colon = token.find(':', at == std::string::npos ? 0 : at);
        if (at == std::string::npos || colon == std::string::npos) {
            throw ScenarioError("tpc: bad fault token " + token +
                                " (want node@round:crash|recover)");
        }
        tpc::FaultEvent event;
        event.node = token.substr(0, at);
        event.round = static_cast<Round>(std::stoul(token.substr(at + 1, colon - at - 1)));
        const std::string kind = token.substr(colon + 1);
        if (kind != "crash" && kind != "recover") {
            throw ScenarioError("tpc: bad fault kind " + kind);
        }
        event.crash = kind == "crash";
        schedule.events.push_back(event);
    }
    return schedule;
}

int cmd_tpc(const std::string& participants_csv, const std::string& votes_csv,
            const std::string& faults_spec, bool probe, const std::string& trace_path) {
    std::vector<PartyId> participants = split_csv(participants_csv);
    if (participants.empty()) participants = {"alice", "bob"};

    if (probe) {
        tpc::BlockingReport report = tpc::blocking_probe(participants, true);
        std::cout << "decision logged at round " << report.decision_round << "\n";
        for (const auto& [round, who] : report.blocked_by_round) {
            std::cout << "round " << round << " blocked:";
            for (const auto& p : who) std::cout << " " << p;
            std::cout << "\n";
        }
        return report.outcome.agreement ? kExitOk : kExitViolation;
    }

    tpc::Config config;
    config.participants = participants;
    std::vector<std::string> votes = split_csv(votes_csv);
    if (votes.empty()) votes.assign(participants.size(), "yes");
    if (votes.size() != participants.size() &&
        votes.end() == std::find_if(votes.begin(), votes.end(),
                                    [](const std::string& v) { return v.find('=') != std::string::npos; })) {
        throw ScenarioError("tpc: need one vote per participant");
    }
    for (std::size_t i = 0; i < votes.size(); ++i) {
        const std::string& token = votes[i];
        auto eq = token.find('=');
        PartyId party;
        std::string value;
        if (eq != std::string::npos) {
            party = token.substr(0, eq);
            value = token.substr(eq + 1);
        } else {
            party = participants[i];
            value = token;
        }
        if (value != "yes" && value != "no") {
            throw ScenarioError("tpc: vote must be yes or no, got " + value);
        }
        config.votes[party] = value == "yes" ? tpc::Vote::Yes : tpc::Vote::No;
    }
    config.faults = parse_faults(faults_spec);

    tpc::Outcome outcome = tpc::run(config);
    if (!trace_path.empty()) write_trace(trace_path, outcome.trace);
    for (const auto& node : outcome.nodes) {
        std::cout << node.id << ": ";
        if (node.decision) {
            std::cout << (*node.decision == tpc::Decision::Commit ? "commit" : "abort")
                      << " @ round " << *node.decided_round;
        } else {
            std::cout << "blocked";
        }
        if (!node.blocked_rounds.empty()) {
            std::cout << "  blocked rounds:";
            for (Round r : node.blocked_rounds) std::cout << " " << r;
        }
        std::cout << "\n";
    }
    std::cout << "agreement: " << (outcome.agreement ? "yes" : "no") << "\n";
    return outcome.agreement ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic multi-chain swap simulator and adversarial explorer"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string trace_path;
    std::string format = "table";
    std::string seed;
    int max_rounds = 0;

    CLI::App* run = app.add_subcommand("run", "execute one scenario run");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--trace", trace_path, "write the JSONL trace here");
    run->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--max-rounds", max_rounds, "round cap for the run");

    std::string deviating;
    std::string report_path;
    CLI::App* explore_cmd = app.add_subcommand("explore", "sweep the deviation catalog");
    explore_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    explore_cmd->add_option("--deviating", deviating, "comma-separated deviating parties")
        ->required();
    explore_cmd->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));
    explore_cmd->add_option("--report", report_path, "write the JSON report here");
    explore_cmd->add_option("--seed", seed, "override the scenario seed");

    std::string participants = "alice,bob";
    std::string votes;
    std::string faults;
    bool probe = false;
    CLI::App* tpc_cmd = app.add_subcommand("tpc", "two-phase commit simulation");
    tpc_cmd->add_option("--participants", participants, "comma-separated participants");
    tpc_cmd->add_option("--votes", votes, "votes per participant (yes,no or alice=yes,...)");
    tpc_cmd->add_option("--faults", faults,
                        "fault schedule: node@round:crash|recover[,...] or "
                        "coordinator@after-prepare");
    tpc_cmd->add_flag("--probe-blocking", probe, "run the coordinator-crash blocking probe");
    tpc_cmd->add_option("--trace", trace_path, "write the JSONL trace here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(scenario_path, trace_path, format, seed, max_rounds);
        }
        if (explore_cmd->parsed()) {
            return cmd_explore(scenario_path, deviating, format, report_path, seed);
        }
        if (tpc_cmd->parsed()) {
            return cmd_tpc(participants, votes, faults, probe, trace_path);
        }
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
