#include "iotforge/explore.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace iotforge {

namespace {

struct Node {
    GlobalConfig config;
    int parent = -1;
    Move incoming; // move that produced this node
};

std::vector<Move> witness_of(const std::vector<Node>& nodes, int index) {
    std::vector<Move> moves;
    for (int at = index; at > 0; at = nodes[static_cast<size_t>(at)].parent)
        moves.push_back(nodes[static_cast<size_t>(at)].incoming);
    std::reverse(moves.begin(), moves.end());
    return moves;
}

bool any_queue_nonempty(const GlobalConfig& config) {
    for (const auto& [name, state] : config.components)
        if (!state.queue.empty()) return true;
    return false;
}

} // namespace

ExplorationReport explore(const BehaviorSim& sim, int max_configs) {
    ExplorationReport report;
    report.abstraction_used = sim.has_unbounded_guards();
    GuardTreatment guards =
        report.abstraction_used ? GuardTreatment::Abstract : GuardTreatment::Concrete;

    std::vector<Node> nodes;
    std::unordered_map<std::string, int> visited;
    std::deque<int> frontier;

    auto add_node = [&](GlobalConfig config, int parent, const Move& incoming) -> int {
        std::string key = canonical_config_text(config);
        auto it = visited.find(key);
        if (it != visited.end()) return -1;
        int index = static_cast<int>(nodes.size());
        visited.emplace(std::move(key), index);
        nodes.push_back({std::move(config), parent, incoming});
        return index;
    };

    int initial_index = add_node(sim.initial_config(), -1, {});
    if (nodes[static_cast<size_t>(initial_index)].config.overflowed) {
        const GlobalConfig& config = nodes.front().config;
        report.overflows.push_back({config_digest(config), *config.overflowed, {}});
        report.reachable_configs = 1;
        return report;
    }
    frontier.push_back(initial_index);

    while (!frontier.empty()) {
        int index = frontier.front();
        frontier.pop_front();
        // nodes grows inside the loop; take a copy of the config
        GlobalConfig config = nodes[static_cast<size_t>(index)].config;

        auto moves = sim.enabled_moves(config, guards);
        bool all_assumed = !moves.empty();
        size_t progress_moves = 0;
        for (const auto& move : moves) {
            if (!move.assumed) all_assumed = false;
            if (!move.assumed || *move.assumed) progress_moves++;
        }

        if (progress_moves == 0 && any_queue_nonempty(config)) {
            report.deadlocks.push_back({config_digest(config), report.abstraction_used,
                                        witness_of(nodes, index)});
            continue;
        }
        if (progress_moves > 0 && all_assumed && any_queue_nonempty(config)) {
            // every move rests on an assumed guard: concretely the
            // configuration may be stuck
            report.deadlocks.push_back({config_digest(config), true, witness_of(nodes, index)});
        }

        for (const auto& move : moves) {
            if (move.assumed && !*move.assumed) continue; // self-loop
            StepResult next = sim.step(config, move);
            if (visited.count(canonical_config_text(next.config))) continue;
            if (static_cast<int>(nodes.size()) >= max_configs) {
                report.truncated = true;
                break;
            }
            int child = add_node(std::move(next.config), index, move);
            if (child < 0) continue;
            const GlobalConfig& child_config = nodes[static_cast<size_t>(child)].config;
            if (child_config.overflowed) {
                report.overflows.push_back({config_digest(child_config),
                                            *child_config.overflowed,
                                            witness_of(nodes, child)});
                continue; // terminal
            }
            frontier.push_back(child);
        }
        if (report.truncated) break;
    }

    report.reachable_configs = static_cast<int>(nodes.size());
    return report;
}

GlobalConfig replay(const BehaviorSim& sim, const std::vector<Move>& witness) {
    GlobalConfig config = sim.initial_config();
    for (const auto& move : witness) config = sim.step(config, move).config;
    return config;
}

std::string exploration_report_to_text(const ExplorationReport& report) {
    std::ostringstream os;
    os << "reachable configurations: " << report.reachable_configs << '\n';
    os << "truncated: " << (report.truncated ? "yes" : "no") << '\n';
    os << "deadlocks: " << report.deadlocks.size() << '\n';
    for (const auto& d : report.deadlocks) {
        os << "  " << (d.potential ? "potential deadlock" : "deadlock") << " at config "
           << d.digest << " (witness: " << d.witness.size() << " steps)\n";
        for (size_t i = 0; i < d.witness.size(); ++i) {
            const Move& m = d.witness[i];
            os << "    step " << (i + 1) << ": " << m.component << " transition #"
               << m.transition_index;
            if (m.assumed) os << " (guard assumed " << (*m.assumed ? "true" : "false") << ")";
            os << '\n';
        }
    }
    os << "overflows: " << report.overflows.size() << '\n';
    for (const auto& o : report.overflows) {
        os << "  queue overflow at component " << o.component << ", config " << o.digest
           << " (witness: " << o.witness.size() << " steps)\n";
    }
    return os.str();
}

} // namespace iotforge
