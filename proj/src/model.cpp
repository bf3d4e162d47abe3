#include "iotforge/model.hpp"

#include <algorithm>

namespace iotforge {

std::string duration_to_text(Duration d) {
    if (d.us != 0 && d.us % 1000000 == 0) return std::to_string(d.us / 1000000) + "s";
    if (d.us != 0 && d.us % 1000 == 0) return std::to_string(d.us / 1000) + "ms";
    return std::to_string(d.us) + "us";
}

std::string type_to_text(const TypeRef& t) {
    switch (t.kind) {
    case PrimKind::Bool: return "bool";
    case PrimKind::Int: return "int";
    case PrimKind::Real: return "real";
    case PrimKind::String: return "string";
    case PrimKind::Enum: {
        std::string out = "enum(";
        for (size_t i = 0; i < t.enum_members.size(); ++i) {
            if (i) out += ", ";
            out += t.enum_members[i];
        }
        out += ')';
        return out;
    }
    }
    return {};
}

// ---- structural equality (spans excluded) ----

namespace {

bool eq(const Ref& a, const Ref& b) { return a.name == b.name; }

bool eq(const std::optional<Ref>& a, const std::optional<Ref>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || eq(*a, *b);
}

bool eq(const TypeRef& a, const TypeRef& b) {
    return a.kind == b.kind && a.enum_members == b.enum_members;
}

template <typename T, typename F>
bool all_eq(const std::vector<T>& a, const std::vector<T>& b, F f) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!f(a[i], b[i])) return false;
    return true;
}

bool eq(const FlowPort& a, const FlowPort& b) {
    return a.name == b.name && a.direction == b.direction && eq(a.payload_type, b.payload_type);
}

bool eq(const Contract& a, const Contract& b) {
    return a.name == b.name && a.assume == b.assume && a.guarantee == b.guarantee;
}

bool eq(const SystemBlock& a, const SystemBlock& b) {
    return a.name == b.name &&
           all_eq(a.flow_ports, b.flow_ports, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.contracts, b.contracts, [](auto& x, auto& y) { return eq(x, y); }) &&
           eq(a.realizes, b.realizes);
}

bool eq(const Connector& a, const Connector& b) {
    return eq(a.from_owner, b.from_owner) && eq(a.from_port, b.from_port) &&
           eq(a.to_owner, b.to_owner) && eq(a.to_port, b.to_port);
}

bool eq(const ComponentPort& a, const ComponentPort& b) {
    return a.name == b.name && a.kind == b.kind &&
           all_eq(a.sends, b.sends, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.receives, b.receives, [](auto& x, auto& y) { return eq(x, y); });
}

bool eq(const PayloadField& a, const PayloadField& b) {
    return a.name == b.name && eq(a.type, b.type);
}

bool eq(const Payload& a, const Payload& b) {
    return a.name == b.name && all_eq(a.fields, b.fields, [](auto& x, auto& y) { return eq(x, y); });
}

bool eq(const Property& a, const Property& b) {
    return a.name == b.name && eq(a.type, b.type) && a.initial == b.initial;
}

bool eq(const TimingAnnotation& a, const TimingAnnotation& b) {
    return a.kind == b.kind && a.wcet == b.wcet && a.period_or_miat == b.period_or_miat &&
           a.priority == b.priority && a.deadline == b.deadline;
}

bool eq(const Parameter& a, const Parameter& b) { return a.name == b.name && eq(a.type, b.type); }

bool eq(const Operation& a, const Operation& b) {
    if (a.name != b.name) return false;
    if (!all_eq(a.parameters, b.parameters, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (a.timing.has_value() != b.timing.has_value()) return false;
    return !a.timing || eq(*a.timing, *b.timing);
}

bool eq(const IoTEvent& a, const IoTEvent& b) {
    return a.name == b.name && a.kind == b.kind && eq(a.port, b.port) &&
           eq(a.payload, b.payload) && eq(a.effect, b.effect);
}

bool eq(const IoTAction& a, const IoTAction& b) {
    return a.name == b.name && a.kind == b.kind && eq(a.payload, b.payload) &&
           eq(a.port, b.port) && eq(a.target_property, b.target_property) && a.value == b.value;
}

bool eq(const IoTState& a, const IoTState& b) {
    return a.name == b.name && eq(a.on_entry, b.on_entry) && eq(a.on_exit, b.on_exit);
}

bool eq(const Transition& a, const Transition& b) {
    if (!(eq(a.source, b.source) && eq(a.target, b.target) && eq(a.trigger, b.trigger)))
        return false;
    if (a.guard.has_value() != b.guard.has_value()) return false;
    return !a.guard || expr_equal(*a.guard, *b.guard);
}

bool eq(const StateMachine& a, const StateMachine& b) {
    return a.name == b.name && eq(a.initial, b.initial) &&
           all_eq(a.states, b.states, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.transitions, b.transitions, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.events, b.events, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.actions, b.actions, [](auto& x, auto& y) { return eq(x, y); });
}

bool eq(const SoftwareComponent& a, const SoftwareComponent& b) {
    if (a.name != b.name) return false;
    if (!all_eq(a.subcomponents, b.subcomponents, [](auto& x, auto& y) { return eq(x, y); }))
        return false;
    if (!all_eq(a.ports, b.ports, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (!all_eq(a.payloads, b.payloads, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (!all_eq(a.properties, b.properties, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (!all_eq(a.operations, b.operations, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (a.state_machine.has_value() != b.state_machine.has_value()) return false;
    return !a.state_machine || eq(*a.state_machine, *b.state_machine);
}

bool eq(const Processor& a, const Processor& b) { return a.name == b.name && a.cores == b.cores; }

bool eq(const DeploymentBinding& a, const DeploymentBinding& b) {
    return eq(a.component, b.component) && eq(a.processor, b.processor);
}

bool eq(const ProtocolDecl& a, const ProtocolDecl& b) {
    return a.name == b.name && a.kind == b.kind && a.custom_kind == b.custom_kind &&
           eq(a.server, b.server);
}

bool eq(const ServerDecl& a, const ServerDecl& b) { return a.name == b.name && a.uri == b.uri; }

bool eq(const StorageDecl& a, const StorageDecl& b) {
    return a.name == b.name && a.capacity == b.capacity;
}

bool eq(const ModeDecl& a, const ModeDecl& b) { return a.name == b.name; }

bool eq(const OperationalConfig& a, const OperationalConfig& b) {
    return all_eq(a.protocols, b.protocols, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.servers, b.servers, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.storage, b.storage, [](auto& x, auto& y) { return eq(x, y); }) &&
           all_eq(a.modes, b.modes, [](auto& x, auto& y) { return eq(x, y); });
}

} // namespace

bool structurally_equal(const SoftwareComponent& a, const SoftwareComponent& b) {
    return eq(a, b);
}

bool structurally_equal(const IoTModel& a, const IoTModel& b) {
    if (a.name != b.name) return false;
    if (!all_eq(a.system.blocks, b.system.blocks, [](auto& x, auto& y) { return eq(x, y); }))
        return false;
    if (!all_eq(a.system.connections, b.system.connections,
                [](auto& x, auto& y) { return eq(x, y); }))
        return false;
    if (!all_eq(a.software, b.software, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (!all_eq(a.hardware, b.hardware, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (!all_eq(a.deployment, b.deployment, [](auto& x, auto& y) { return eq(x, y); })) return false;
    if (a.operational.has_value() != b.operational.has_value()) return false;
    return !a.operational || eq(*a.operational, *b.operational);
}

} // namespace iotforge
