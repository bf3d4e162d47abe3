#pragma once

#include <string>
#include <vector>

#include "iotforge/behavior.hpp"

namespace iotforge {

struct DeadlockInfo {
    std::string digest;
    bool potential = false; // classified under guard abstraction
    std::vector<Move> witness;
};

struct OverflowInfo {
    std::string digest;
    std::string component;
    std::vector<Move> witness;
};

struct ExplorationReport {
    int reachable_configs = 0;
    std::vector<DeadlockInfo> deadlocks;
    std::vector<OverflowInfo> overflows;
    bool truncated = false;
    bool abstraction_used = false;
};

// Breadth-first search over global configurations with a canonical-text
// visited set. A deadlock is a configuration with no enabled moves and
// at least one undelivered message; all-queues-empty quiescence is not
// reported. Witnesses replay from the initial configuration.
ExplorationReport explore(const BehaviorSim& sim, int max_configs = 100000);

// Applies the witness from the initial configuration.
GlobalConfig replay(const BehaviorSim& sim, const std::vector<Move>& witness);

std::string exploration_report_to_text(const ExplorationReport& report);

} // namespace iotforge
