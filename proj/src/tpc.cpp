#include "swapsim/tpc.hpp"

#include <algorithm>
#include <deque>

namespace swapsim {
namespace tpc {

namespace {

using ordered_json = nlohmann::ordered_json;

enum class MsgKind { PrepareRequest, VoteMsg, DecisionMsg, OutcomeQuery, OutcomeReply };

struct Message {
    PartyId from;
    PartyId to;
    MsgKind kind;
    std::optional<Vote> vote;
    std::optional<Decision> decision;
};

const char* msg_kind_name(MsgKind kind) {
    switch (kind) {
        case MsgKind::PrepareRequest: return "prepare_request";
        case MsgKind::VoteMsg: return "vote";
        case MsgKind::DecisionMsg: return "decision";
        case MsgKind::OutcomeQuery: return "outcome_query";
        case MsgKind::OutcomeReply: return "outcome_reply";
    }
    return "";
}

const char* decision_name(Decision d) { return d == Decision::Commit ? "commit" : "abort"; }

struct Node {
    PartyId id;
    bool is_coordinator = false;
    bool up = true;

    // Stable memory: survives crashes.
    bool prepared = false;
    std::optional<Vote> vote;
    std::optional<Decision> decision;
    std::optional<Round> decided_round;

    // Volatile memory: erased by a crash.
    std::map<PartyId, Vote> votes_received;
    bool needs_query = false;
    std::size_t query_target = 0;

    std::vector<Round> blocked_rounds;

    void crash() {
        up = false;
        votes_received.clear();
        needs_query = false;
        query_target = 0;
    }
};

struct Sim {
    const Config& config;
    std::map<PartyId, Node> nodes;
    std::vector<std::pair<Round, Message>> wire;  // (deliver round, message)
    std::vector<TraceEvent> trace;
    Round now = 0;

    explicit Sim(const Config& cfg) : config(cfg) {}

    void emit(const PartyId& actor, ordered_json action) {
        TraceEvent event;
        event.round = now;
        event.actor = actor;
        event.chain = "tpc";
        event.action = std::move(action);
        event.result = ordered_json{{"status", "accepted"}};
        trace.push_back(std::move(event));
    }

    void send(const PartyId& from, const PartyId& to, MsgKind kind,
              std::optional<Vote> vote = std::nullopt,
              std::optional<Decision> decision = std::nullopt) {
        wire.push_back({now + 1, Message{from, to, kind, vote, decision}});
        ordered_json action{{"type", "send"}, {"kind", msg_kind_name(kind)}, {"to", to}};
        if (vote) action["vote"] = *vote == Vote::Yes ? "yes" : "no";
        if (decision) action["decision"] = decision_name(*decision);
        emit(from, std::move(action));
    }

    void log_decision(Node& node, Decision decision) {
        node.decision = decision;
        node.decided_round = now;
        node.needs_query = false;
        emit(node.id, ordered_json{{"type", "decide"}, {"decision", decision_name(decision)}});
    }
};

}  // namespace

bool fault_schedule_valid(const FaultSchedule& schedule, const PartyId& coordinator,
                          const std::vector<PartyId>& participants) {
    std::map<PartyId, bool> up;
    up[coordinator] = true;
    for (const PartyId& p : participants) up[p] = true;
    std::vector<FaultEvent> events = schedule.events;
    std::stable_sort(events.begin(), events.end(),
                     [](const FaultEvent& a, const FaultEvent& b) { return a.round < b.round; });
    std::set<std::pair<Round, PartyId>> seen;
    for (const FaultEvent& e : events) {
        auto it = up.find(e.node);
        if (it == up.end()) return false;
        if (!seen.insert({e.round, e.node}).second) return false;
        if (e.crash && !it->second) return false;
        if (!e.crash && it->second) return false;
        it->second = !e.crash;
    }
    return true;
}

Outcome run(const Config& config) {
    if (config.participants.empty()) {
        throw std::invalid_argument("tpc: at least one participant required");
    }
    for (const PartyId& p : config.participants) {
        if (!config.votes.count(p)) {
            throw std::invalid_argument("tpc: missing vote for participant " + p);
        }
    }
    if (!fault_schedule_valid(config.faults, config.coordinator, config.participants)) {
        throw std::invalid_argument("tpc: malformed fault schedule");
    }

    Sim sim(config);
    Node coordinator;
    coordinator.id = config.coordinator;
    coordinator.is_coordinator = true;
    sim.nodes[config.coordinator] = coordinator;
    for (const PartyId& p : config.participants) {
        Node node;
        node.id = p;
        sim.nodes[p] = node;
    }

    // Votes requested in round 0 arrive back by round 2; missing then count no.
    const Round vote_deadline = 2;

    for (Round r = 0; r < config.horizon; ++r) {
        sim.now = r;

        std::map<PartyId, bool> recovered_now;
        for (const FaultEvent& e : config.faults.events) {
            if (e.round != r) continue;
            Node& node = sim.nodes.at(e.node);
            if (e.crash) {
                node.crash();
                sim.emit(node.id, ordered_json{{"type", "crash"}});
            } else {
                node.up = true;
                recovered_now[node.id] = true;
                sim.emit(node.id, ordered_json{{"type", "recover"}});
            }
        }

        // Deliver this round's messages; a crashed addressee loses them.
        std::map<PartyId, std::vector<Message>> inbox;
        std::vector<std::pair<Round, Message>> still_in_flight;
        for (auto& [deliver_round, msg] : sim.wire) {
            if (deliver_round != r) {
                still_in_flight.push_back({deliver_round, msg});
            } else if (sim.nodes.at(msg.to).up) {
                inbox[msg.to].push_back(msg);
            }
        }
        sim.wire.swap(still_in_flight);

        // Coordinator acts first, then participants in configured order.
        std::vector<PartyId> order;
        order.push_back(config.coordinator);
        for (const PartyId& p : config.participants) order.push_back(p);

        for (const PartyId& id : order) {
            Node& node = sim.nodes.at(id);
            if (!node.up) continue;

            for (const Message& msg : inbox[id]) {
                switch (msg.kind) {
                    case MsgKind::PrepareRequest: {
                        if (node.vote) break;
                        Vote v = config.votes.at(id);
                        node.vote = v;
                        if (v == Vote::Yes) {
                            node.prepared = true;  // tentative changes now in stable storage
                            sim.send(id, config.coordinator, MsgKind::VoteMsg, Vote::Yes);
                        } else {
                            sim.send(id, config.coordinator, MsgKind::VoteMsg, Vote::No);
                            // A no-voter unilaterally knows the outcome.
                            sim.log_decision(node, Decision::Abort);
                        }
                        break;
                    }
                    case MsgKind::VoteMsg:
                        node.votes_received[msg.from] = *msg.vote;
                        break;
                    case MsgKind::DecisionMsg:
                    case MsgKind::OutcomeReply:
                        if (!node.decision) {
                            sim.log_decision(node, *msg.decision);
                        }
                        break;
                    case MsgKind::OutcomeQuery:
                        if (node.decision) {
                            sim.send(id, msg.from, MsgKind::OutcomeReply, std::nullopt,
                                     node.decision);
                        }
                        break;
                }
            }

            if (node.is_coordinator) {
                if (r == 0 && !node.decision) {
                    for (const PartyId& p : config.participants) {
                        sim.send(id, p, MsgKind::PrepareRequest);
                    }
                }
                if (recovered_now.count(id)) {
                    if (!node.decision) {
                        // Crashed before logging a decision: abort on recovery.
                        sim.log_decision(node, Decision::Abort);
                    }
                    for (const PartyId& p : config.participants) {
                        sim.send(id, p, MsgKind::DecisionMsg, std::nullopt, node.decision);
                    }
                } else if (!node.decision && r == vote_deadline) {
                    bool all_yes = true;
                    for (const PartyId& p : config.participants) {
                        auto it = node.votes_received.find(p);
                        if (it == node.votes_received.end() || it->second == Vote::No) {
                            all_yes = false;  // missing votes count as no
                            break;
                        }
                    }
                    sim.log_decision(node, all_yes ? Decision::Commit : Decision::Abort);
                    for (const PartyId& p : config.participants) {
                        sim.send(id, p, MsgKind::DecisionMsg, std::nullopt, node.decision);
                    }
                }
            } else {
                if (recovered_now.count(id) && node.prepared && !node.decision) {
                    node.needs_query = true;
                    node.query_target = 0;
                }
                if (node.needs_query && !node.decision) {
                    // Coordinator first, then peers, one query per round.
                    std::vector<PartyId> targets;
                    targets.push_back(config.coordinator);
                    for (const PartyId& p : config.participants) {
                        if (p != id) targets.push_back(p);
                    }
                    const PartyId& target = targets[node.query_target % targets.size()];
                    node.query_target += 1;
                    sim.send(id, target, MsgKind::OutcomeQuery);
                }
            }
        }

        for (const PartyId& p : config.participants) {
            Node& node = sim.nodes.at(p);
            if (node.up && node.prepared && !node.decision) {
                node.blocked_rounds.push_back(r);
            }
        }
    }

    Outcome outcome;
    std::optional<Decision> logged;
    std::vector<PartyId> order;
    order.push_back(config.coordinator);
    for (const PartyId& p : config.participants) order.push_back(p);
    for (const PartyId& id : order) {
        const Node& node = sim.nodes.at(id);
        NodeReport report;
        report.id = id;
        report.decision = node.decision;
        report.decided_round = node.decided_round;
        report.blocked_rounds = node.blocked_rounds;
        if (node.decision) {
            if (logged && *logged != *node.decision) {
                outcome.agreement = false;
            }
            logged = node.decision;
        }
        outcome.nodes.push_back(std::move(report));
    }
    outcome.trace = std::move(sim.trace);
    return outcome;
}

BlockingReport blocking_probe(const std::vector<PartyId>& participants,
                              bool crash_coordinator_after_prepare) {
    Config config;
    config.participants = participants;
    for (const PartyId& p : participants) config.votes[p] = Vote::Yes;
    if (crash_coordinator_after_prepare) {
        config.faults.events.push_back({2, config.coordinator, true});
        config.faults.events.push_back({6, config.coordinator, false});
    }

    BlockingReport report;
    report.outcome = run(config);
    for (const auto& node : report.outcome.nodes) {
        if (node.id == config.coordinator && node.decided_round) {
            report.decision_round = *node.decided_round;
        }
    }
    std::map<Round, std::vector<PartyId>> by_round;
    for (const auto& node : report.outcome.nodes) {
        for (Round r : node.blocked_rounds) {
            by_round[r].push_back(node.id);
        }
    }
    for (auto& [round, who] : by_round) {
        std::sort(who.begin(), who.end());
        report.blocked_by_round.push_back({round, who});
    }
    return report;
}

}  // namespace tpc
}  // namespace swapsim
