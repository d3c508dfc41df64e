#pragma once

#include <map>
#include <optional>
#include <vector>

#include "swapsim/core.hpp"
#include "swapsim/ledger.hpp"

namespace swapsim {
namespace tpc {

enum class Vote { Yes, No };
enum class Decision { Commit, Abort };

struct FaultEvent {
    Round round = 0;
    PartyId node;
    bool crash = true;  // false = recover
};

// Crash only when up, recover only when crashed; validated before a run.
struct FaultSchedule {
    std::vector<FaultEvent> events;
};

bool fault_schedule_valid(const FaultSchedule& schedule, const PartyId& coordinator,
                          const std::vector<PartyId>& participants);

struct Config {
    PartyId coordinator = "carol";
    std::vector<PartyId> participants;  // at least one
    std::map<PartyId, Vote> votes;      // one entry per participant
    FaultSchedule faults;
    Round horizon = 10;
};

struct NodeReport {
    PartyId id;
    std::optional<Decision> decision;  // nullopt: blocked or never decided
    std::optional<Round> decided_round;
    std::vector<Round> blocked_rounds;  // prepared with outcome unknown at end of round
};

struct Outcome {
    std::vector<NodeReport> nodes;  // coordinator first, then participants in order
    bool agreement = true;          // no two logged decisions differ
    std::vector<TraceEvent> trace;
};

Outcome run(const Config& config);

struct BlockingReport {
    // Rounds at which at least one participant sat prepared with the outcome
    // unknown, and who.
    std::vector<std::pair<Round, std::vector<PartyId>>> blocked_by_round;
    Round decision_round = 0;  // round the coordinator logged its decision
    Outcome outcome;
};

BlockingReport blocking_probe(const std::vector<PartyId>& participants,
                              bool crash_coordinator_after_prepare);

}  // namespace tpc
}  // namespace swapsim
