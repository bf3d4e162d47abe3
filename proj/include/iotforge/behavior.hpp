#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotforge/symbol_table.hpp"

namespace iotforge {

// A payload instance in flight. Fields are kept sorted by name so
// configurations have a canonical form.
struct Message {
    std::string payload;
    std::vector<std::pair<std::string, Literal>> fields;
};

struct ComponentState {
    std::string state;
    std::map<std::string, Literal> properties;
    std::deque<Message> queue;
};

struct GlobalConfig {
    std::map<std::string, ComponentState> components; // keyed by qualified name
    std::optional<std::string> overflowed;            // component whose queue overflowed
};

// One component firing one transition. `assumed` is set when the guard
// mentions an unbounded-domain property and exploration branched on it;
// an assumed-false move changes nothing (the transition is skipped).
struct Move {
    std::string component;
    size_t transition_index = 0;
    std::optional<bool> assumed;
};

struct Emission {
    std::string to_component;
    Message message;
    bool dropped = false; // unconnected port or stateless receiver
};

struct StepResult {
    GlobalConfig config;
    std::optional<Message> consumed;
    std::vector<Emission> emitted;
    bool overflow = false;
};

struct TraceEntry {
    Move move;
    std::string source_state;
    std::string target_state;
    std::string trigger;
    std::optional<Message> consumed;
    std::vector<Emission> emitted;
};

struct Trace {
    std::vector<TraceEntry> entries;
    std::string terminal_reason; // step-limit | deadlock-or-quiescence | overflow
    bool deadlocked = false;     // no moves with at least one queued message
    GlobalConfig final_config;
};

enum class GuardTreatment {
    Concrete, // evaluate every guard against current values
    Abstract, // branch on guards over unbounded-domain properties
};

struct SimOptions {
    int queue_bound = 4;
};

// Executes the composition of all component state machines over
// point-to-point connectors with bounded FIFO queues. One component
// fires per step; a step runs OnExit, consumes the trigger message (for
// incoming events), switches state, then runs OnEntry.
class BehaviorSim {
public:
    BehaviorSim(const SymbolTable& table, SimOptions options = {});

    // Every component in its initial state with initial property values;
    // the initial states' OnEntry events fire.
    GlobalConfig initial_config() const;

    std::vector<Move> enabled_moves(const GlobalConfig& config,
                                    GuardTreatment guards = GuardTreatment::Concrete) const;

    StepResult step(const GlobalConfig& config, const Move& move) const;

    // Uniformly random enabled move per step, deterministic for a seed.
    Trace run_random(int steps, std::uint64_t seed) const;

    const SymbolTable& table() const { return table_; }
    int queue_bound() const { return options_.queue_bound; }

    // True when some transition guard mentions an int/real/string
    // property; exploration results are then only "potential".
    bool has_unbounded_guards() const;

    const Transition& transition(const Move& move) const;

private:
    struct Firing; // effect execution context

    void fire_event(const std::string& component, const Ref& event_ref, Firing& firing) const;
    void run_action(const std::string& component, const std::string& action_name,
                    Firing& firing) const;
    void emit_payload(const std::string& component, const std::string& port,
                      const std::string& payload, Firing& firing) const;

    const SymbolTable& table_;
    SimOptions options_;
};

// Canonical one-line rendering; equal configurations produce equal text.
std::string canonical_config_text(const GlobalConfig& config);

// 16-hex-digit digest of the canonical text.
std::string config_digest(const GlobalConfig& config);

std::string message_to_text(const Message& message);

// Line-oriented trace rendering:
// "step k: <component> <source> --<event>--> <target> [consumed ...] [emitted ...]"
std::string trace_to_text(const Trace& trace);

} // namespace iotforge
