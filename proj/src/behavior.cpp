#include "iotforge/behavior.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "iotforge/guards.hpp"

namespace iotforge {

namespace {

Literal default_value(const TypeRef& type) {
    switch (type.kind) {
    case PrimKind::Bool: return Literal::boolean(false);
    case PrimKind::Int: return Literal::integer(0);
    case PrimKind::Real: return Literal::real(0.0);
    case PrimKind::String: return Literal::string("");
    case PrimKind::Enum: return Literal::enum_member(type.enum_members.front());
    }
    return Literal::integer(0);
}

const Literal* find_field(const Message& message, const std::string& name) {
    for (const auto& [field, value] : message.fields)
        if (field == name) return &value;
    return nullptr;
}

bool numeric_compare(double lhs, double rhs, CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return lhs == rhs;
    case CompareOp::Ne: return lhs != rhs;
    case CompareOp::Lt: return lhs < rhs;
    case CompareOp::Le: return lhs <= rhs;
    case CompareOp::Gt: return lhs > rhs;
    case CompareOp::Ge: return lhs >= rhs;
    }
    return false;
}

double as_number(const Literal& lit) {
    return lit.kind == PrimKind::Int ? static_cast<double>(lit.int_value) : lit.real_value;
}

// Guard evaluation over a component's properties and (for incoming
// triggers) the consumed message's fields. Fields shadow properties.
struct GuardEval {
    const std::map<std::string, Literal>& properties;
    const Message* message;

    Literal value_of(const Expr& e) const {
        if (e.kind == Expr::Kind::Literal) return e.literal;
        if (message) {
            if (const Literal* field = find_field(*message, e.ident)) return *field;
        }
        auto it = properties.find(e.ident);
        if (it != properties.end()) return it->second;
        throw QueryError("guard references unknown identifier '" + e.ident + "'");
    }

    bool eval(const ExprPtr& e) const {
        switch (e->kind) {
        case Expr::Kind::Literal:
        case Expr::Kind::Identifier: {
            Literal v = value_of(*e);
            if (v.kind != PrimKind::Bool)
                throw QueryError("guard atom is not boolean");
            return v.bool_value;
        }
        case Expr::Kind::Compare: {
            Literal lhs = value_of_expr(e->lhs);
            Literal rhs = value_of_expr(e->rhs);
            bool numeric = (lhs.kind == PrimKind::Int || lhs.kind == PrimKind::Real) &&
                           (rhs.kind == PrimKind::Int || rhs.kind == PrimKind::Real);
            if (numeric) return numeric_compare(as_number(lhs), as_number(rhs), e->op);
            bool equal = false;
            if (lhs.kind == PrimKind::Bool && rhs.kind == PrimKind::Bool)
                equal = lhs.bool_value == rhs.bool_value;
            else
                // string/enum values compare by text
                equal = lhs.text == rhs.text;
            if (e->op == CompareOp::Eq) return equal;
            if (e->op == CompareOp::Ne) return !equal;
            throw QueryError("ordering comparison on non-numeric guard operands");
        }
        case Expr::Kind::And: return eval(e->lhs) && eval(e->rhs);
        case Expr::Kind::Or: return eval(e->lhs) || eval(e->rhs);
        case Expr::Kind::Not: return !eval(e->lhs);
        }
        return false;
    }

    Literal value_of_expr(const ExprPtr& e) const {
        if (e->kind == Expr::Kind::Literal || e->kind == Expr::Kind::Identifier)
            return value_of(*e);
        throw QueryError("nested boolean expression used as comparison operand");
    }
};

} // namespace

// Execution context for one step: where effects append emissions and the
// (possibly mutated) next configuration lives.
struct BehaviorSim::Firing {
    GlobalConfig& config;
    std::vector<Emission>& emitted;
    bool& overflow;
};

BehaviorSim::BehaviorSim(const SymbolTable& table, SimOptions options)
    : table_(table), options_(options) {}

const Transition& BehaviorSim::transition(const Move& move) const {
    const ComponentInfo* info = table_.find_component(move.component);
    if (!info || !info->component->state_machine)
        throw QueryError("move references unknown component '" + move.component + "'");
    const auto& transitions = info->component->state_machine->transitions;
    if (move.transition_index >= transitions.size())
        throw QueryError("move references transition out of range");
    return transitions[move.transition_index];
}

bool BehaviorSim::has_unbounded_guards() const {
    for (const auto& [qname, info] : table_.components()) {
        if (!info.component->state_machine) continue;
        for (const auto& tr : info.component->state_machine->transitions) {
            if (!tr.guard || !*tr.guard) continue;
            const Payload* trigger_payload = nullptr;
            auto ev = info.events.find(tr.trigger.name);
            if (ev != info.events.end() && ev->second->kind == EventKind::Incoming &&
                ev->second->payload) {
                auto p = info.payloads.find(ev->second->payload->name);
                if (p != info.payloads.end()) trigger_payload = p->second;
            }
            if (guard_mentions_unbounded_property(*tr.guard, info, trigger_payload)) return true;
        }
    }
    return false;
}

GlobalConfig BehaviorSim::initial_config() const {
    GlobalConfig config;
    for (const auto& [qname, info] : table_.components()) {
        if (!info.component->state_machine) continue;
        ComponentState state;
        state.state = info.component->state_machine->initial.name;
        for (const auto& prop : info.component->properties)
            state.properties[prop.name] = prop.initial;
        config.components.emplace(qname, std::move(state));
    }
    // the initial states' OnEntry events fire, so entry effects may
    // already enqueue messages (or overflow)
    std::vector<Emission> emitted;
    bool overflow = false;
    Firing firing{config, emitted, overflow};
    for (const auto& [qname, info] : table_.components()) {
        if (!info.component->state_machine) continue;
        const IoTState* initial = nullptr;
        auto it = info.states.find(config.components.at(qname).state);
        if (it != info.states.end()) initial = it->second;
        if (initial && initial->on_entry) fire_event(qname, *initial->on_entry, firing);
    }
    return config;
}

std::vector<Move> BehaviorSim::enabled_moves(const GlobalConfig& config,
                                             GuardTreatment guards) const {
    std::vector<Move> moves;
    for (const auto& [qname, comp_state] : config.components) {
        const ComponentInfo* info = table_.find_component(qname);
        if (!info || !info->component->state_machine) continue;
        const StateMachine& sm = *info->component->state_machine;
        for (size_t i = 0; i < sm.transitions.size(); ++i) {
            const Transition& tr = sm.transitions[i];
            if (tr.source.name != comp_state.state) continue;
            auto event_it = info->events.find(tr.trigger.name);
            if (event_it == info->events.end()) continue;
            const IoTEvent& trigger = *event_it->second;

            const Message* head = nullptr;
            if (trigger.kind == EventKind::Incoming) {
                if (comp_state.queue.empty()) continue;
                head = &comp_state.queue.front();
                if (!trigger.payload || head->payload != trigger.payload->name) continue;
            }

            if (tr.guard && *tr.guard) {
                const Payload* trigger_payload = nullptr;
                if (trigger.kind == EventKind::Incoming && trigger.payload) {
                    auto p = info->payloads.find(trigger.payload->name);
                    if (p != info->payloads.end()) trigger_payload = p->second;
                }
                bool unbounded =
                    guard_mentions_unbounded_property(*tr.guard, *info, trigger_payload);
                if (guards == GuardTreatment::Abstract && unbounded) {
                    // both outcomes listed as distinct moves
                    moves.push_back({qname, i, true});
                    moves.push_back({qname, i, false});
                    continue;
                }
                GuardEval eval{comp_state.properties, head};
                if (!eval.eval(*tr.guard)) continue;
            }
            moves.push_back({qname, i, std::nullopt});
        }
    }
    return moves;
}

void BehaviorSim::emit_payload(const std::string& component, const std::string& port,
                               const std::string& payload, Firing& firing) const {
    const ComponentInfo* info = table_.find_component(component);
    Message message;
    message.payload = payload;
    // fields snapshot same-named properties of the sender; anything else
    // takes the type default
    auto payload_it = info->payloads.find(payload);
    if (payload_it != info->payloads.end()) {
        const ComponentState& sender = firing.config.components.at(component);
        for (const auto& field : payload_it->second->fields) {
            auto prop = sender.properties.find(field.name);
            if (prop != sender.properties.end() && prop->second.kind == field.type.kind)
                message.fields.emplace_back(field.name, prop->second);
            else
                message.fields.emplace_back(field.name, default_value(field.type));
        }
        std::sort(message.fields.begin(), message.fields.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    Emission emission;
    emission.message = message;
    auto peer = connected_peer(table_, component, port);
    if (!peer || !firing.config.components.count(peer->component)) {
        emission.dropped = true;
        firing.emitted.push_back(std::move(emission));
        return;
    }
    emission.to_component = peer->component;
    ComponentState& receiver = firing.config.components.at(peer->component);
    if (static_cast<int>(receiver.queue.size()) >= options_.queue_bound) {
        firing.overflow = true;
        if (!firing.config.overflowed) firing.config.overflowed = peer->component;
        emission.dropped = true;
        firing.emitted.push_back(std::move(emission));
        return;
    }
    receiver.queue.push_back(message);
    firing.emitted.push_back(std::move(emission));
}

void BehaviorSim::run_action(const std::string& component, const std::string& action_name,
                             Firing& firing) const {
    const ComponentInfo* info = table_.find_component(component);
    auto action_it = info->actions.find(action_name);
    if (action_it == info->actions.end()) return;
    const IoTAction& action = *action_it->second;
    switch (action.kind) {
    case ActionKind::Send:
        if (action.payload && action.port)
            emit_payload(component, action.port->name, action.payload->name, firing);
        break;
    case ActionKind::Receive:
        // binding from the consumed message happens at consumption time;
        // outside that context a receive action changes nothing
        break;
    case ActionKind::Assign:
        if (action.target_property && action.value) {
            ComponentState& state = firing.config.components.at(component);
            state.properties[action.target_property->name] = *action.value;
        }
        break;
    }
}

void BehaviorSim::fire_event(const std::string& component, const Ref& event_ref,
                             Firing& firing) const {
    const ComponentInfo* info = table_.find_component(component);
    auto event_it = info->events.find(event_ref.name);
    if (event_it == info->events.end()) return;
    const IoTEvent& event = *event_it->second;
    if (event.kind == EventKind::Outgoing && event.port && event.payload)
        emit_payload(component, event.port->name, event.payload->name, firing);
    if (event.effect) run_action(component, event.effect->name, firing);
}

StepResult BehaviorSim::step(const GlobalConfig& config, const Move& move) const {
    StepResult result;
    result.config = config;
    if (move.assumed && !*move.assumed) return result; // skipped transition

    const ComponentInfo* info = table_.find_component(move.component);
    const StateMachine& sm = *info->component->state_machine;
    const Transition& tr = sm.transitions[move.transition_index];
    Firing firing{result.config, result.emitted, result.overflow};

    // OnExit of the source state
    auto source_it = info->states.find(tr.source.name);
    if (source_it != info->states.end() && source_it->second->on_exit)
        fire_event(move.component, *source_it->second->on_exit, firing);

    // trigger: consume for incoming, emit for outgoing, then its effect
    auto trigger_it = info->events.find(tr.trigger.name);
    if (trigger_it != info->events.end()) {
        const IoTEvent& trigger = *trigger_it->second;
        if (trigger.kind == EventKind::Incoming) {
            ComponentState& state = result.config.components.at(move.component);
            if (state.queue.empty() || !trigger.payload ||
                state.queue.front().payload != trigger.payload->name)
                throw QueryError("move is not enabled: no matching message to consume");
            result.consumed = state.queue.front();
            state.queue.pop_front();
            // receive-kind effects bind message fields to properties
            if (trigger.effect) {
                auto action_it = info->actions.find(trigger.effect->name);
                if (action_it != info->actions.end() &&
                    action_it->second->kind == ActionKind::Receive) {
                    for (const auto& [field, value] : result.consumed->fields) {
                        auto prop = state.properties.find(field);
                        if (prop != state.properties.end() && prop->second.kind == value.kind)
                            prop->second = value;
                    }
                } else {
                    run_action(move.component, trigger.effect->name, firing);
                }
            }
        } else {
            if (trigger.kind == EventKind::Outgoing && trigger.port && trigger.payload)
                emit_payload(move.component, trigger.port->name, trigger.payload->name, firing);
            if (trigger.effect) run_action(move.component, trigger.effect->name, firing);
        }
    }

    // the transition itself
    result.config.components.at(move.component).state = tr.target.name;

    // OnEntry of the target state
    auto target_it = info->states.find(tr.target.name);
    if (target_it != info->states.end() && target_it->second->on_entry)
        fire_event(move.component, *target_it->second->on_entry, firing);

    return result;
}

Trace BehaviorSim::run_random(int steps, std::uint64_t seed) const {
    Trace trace;
    GlobalConfig config = initial_config();
    std::mt19937_64 rng(seed);
    for (int i = 0; i < steps; ++i) {
        if (config.overflowed) {
            trace.terminal_reason = "overflow";
            trace.final_config = config;
            return trace;
        }
        auto moves = enabled_moves(config, GuardTreatment::Concrete);
        if (moves.empty()) {
            trace.terminal_reason = "deadlock-or-quiescence";
            for (const auto& [name, state] : config.components)
                if (!state.queue.empty()) trace.deadlocked = true;
            trace.final_config = config;
            return trace;
        }
        // modulo keeps traces identical across standard libraries
        const Move& move = moves[rng() % moves.size()];
        const Transition& tr = transition(move);
        StepResult step_result = step(config, move);
        TraceEntry entry;
        entry.move = move;
        entry.source_state = tr.source.name;
        entry.target_state = tr.target.name;
        entry.trigger = tr.trigger.name;
        entry.consumed = step_result.consumed;
        entry.emitted = step_result.emitted;
        trace.entries.push_back(std::move(entry));
        config = std::move(step_result.config);
    }
    trace.terminal_reason = "step-limit";
    trace.final_config = config;
    return trace;
}

std::string message_to_text(const Message& message) {
    std::string out = message.payload;
    if (!message.fields.empty()) {
        out += '{';
        for (size_t i = 0; i < message.fields.size(); ++i) {
            if (i) out += ", ";
            out += message.fields[i].first + "=" + literal_to_text(message.fields[i].second);
        }
        out += '}';
    }
    return out;
}

std::string canonical_config_text(const GlobalConfig& config) {
    std::ostringstream os;
    for (const auto& [name, state] : config.components) {
        os << name << "@" << state.state << "{";
        bool first = true;
        for (const auto& [prop, value] : state.properties) {
            if (!first) os << ",";
            first = false;
            os << prop << "=" << literal_to_text(value);
        }
        os << "}[";
        for (size_t i = 0; i < state.queue.size(); ++i) {
            if (i) os << ",";
            os << message_to_text(state.queue[i]);
        }
        os << "];";
    }
    if (config.overflowed) os << "overflow=" << *config.overflowed;
    return os.str();
}

std::string config_digest(const GlobalConfig& config) {
    // FNV-1a 64
    std::string text = canonical_config_text(config);
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = hex[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

std::string trace_to_text(const Trace& trace) {
    std::ostringstream os;
    for (size_t i = 0; i < trace.entries.size(); ++i) {
        const TraceEntry& e = trace.entries[i];
        os << "step " << (i + 1) << ": " << e.move.component << " " << e.source_state << " --"
           << e.trigger << "--> " << e.target_state;
        if (e.consumed) os << " [consumed " << message_to_text(*e.consumed) << "]";
        for (const auto& emission : e.emitted) {
            os << " [emitted " << message_to_text(emission.message);
            if (emission.dropped) os << " -> dropped";
            else os << " -> " << emission.to_component;
            os << "]";
        }
        os << '\n';
    }
    os << "terminal: " << trace.terminal_reason << '\n';
    return os.str();
}

} // namespace iotforge
